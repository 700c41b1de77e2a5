#include "klshell/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kl {

namespace {

using nlohmann::json;
constexpr int kFormatVersion = 1;

json knots_json(const KnotVector& kv) { return json(kv.knots()); }

json space_json(const SplineSpace& s) {
    json j;
    j["degrees"] = (s.dim() == 2) ? json::array({s.degree(0), s.degree(1)}) : json::array({s.degree(0)});
    json knots = json::array();
    for (int d = 0; d < s.dim(); ++d) knots.push_back(knots_json(s.knot_vector(d)));
    j["knots"] = knots;
    if (s.rational()) j["weights"] = s.weights();
    return j;
}

SplineSpace space_from_json(const json& j) {
    const auto degrees = j.at("degrees").get<std::vector<int>>();
    const auto knots = j.at("knots");
    std::vector<double> weights;
    if (j.contains("weights")) weights = j.at("weights").get<std::vector<double>>();
    if (degrees.size() == 1) {
        KnotVector kx(knots.at(0).get<std::vector<double>>(), degrees[0]);
        return weights.empty() ? SplineSpace(kx) : SplineSpace(kx, weights);
    }
    if (degrees.size() == 2) {
        KnotVector kx(knots.at(0).get<std::vector<double>>(), degrees[0]);
        KnotVector ky(knots.at(1).get<std::vector<double>>(), degrees[1]);
        return weights.empty() ? SplineSpace(kx, ky) : SplineSpace(kx, ky, weights);
    }
    throw std::runtime_error("model format: only 1 or 2 parametric directions are supported");
}

json curve_json(const ParamCurve& c) {
    json j;
    j["degree"] = c.degree();
    j["knots"] = knots_json(c.space().knot_vector(0));
    json pts = json::array();
    for (const Vec2& p : c.control_points()) pts.push_back(json::array({p[0], p[1]}));
    j["control_points"] = pts;
    return j;
}

ParamCurve curve_from_json(const json& j) {
    KnotVector kv(j.at("knots").get<std::vector<double>>(), j.at("degree").get<int>());
    std::vector<Vec2> pts;
    for (const auto& p : j.at("control_points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return ParamCurve(SplineSpace(std::move(kv)), std::move(pts));
}

json material_json(const Material& m) {
    json j;
    if (m.is_isotropic()) {
        j["type"] = "isotropic";
        j["youngs"] = m.youngs();
        j["poisson"] = m.poisson();
        j["thickness"] = m.thickness();
    } else {
        j["type"] = "laminate";
        json plies = json::array();
        for (const Ply& p : m.plies())
            plies.push_back({{"e1", p.e1},
                             {"e2", p.e2},
                             {"g12", p.g12},
                             {"nu12", p.nu12},
                             {"angle", p.angle},
                             {"thickness", p.thickness}});
        j["plies"] = plies;
    }
    return j;
}

Material material_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "isotropic")
        return Material::isotropic(j.at("youngs").get<double>(), j.at("poisson").get<double>(),
                                   j.at("thickness").get<double>());
    if (type == "laminate") {
        std::vector<Ply> plies;
        for (const auto& p : j.at("plies"))
            plies.push_back({p.at("e1").get<double>(), p.at("e2").get<double>(), p.at("g12").get<double>(),
                             p.at("nu12").get<double>(), p.at("angle").get<double>(),
                             p.at("thickness").get<double>()});
        return Material::laminate(std::move(plies));
    }
    throw std::runtime_error("model format: unknown material type " + type);
}

json model_json(const PatchSet& patches, const MultiPatchModel& model) {
    json j;
    j["version"] = kFormatVersion;
    json jp = json::array();
    for (int p = 0; p < patches.size(); ++p) {
        const Patch& patch = patches[p];
        json e;
        e["geometry"] = space_json(patch.geometry.space());
        json cps = json::array();
        for (const Vec3& c : patch.geometry.control_points())
            cps.push_back(json::array({c[0], c[1], c[2]}));
        e["geometry"]["control_points"] = cps;
        e["space"] = space_json(patch.space);
        e["material"] = material_json(patch.material);
        json trims = json::array();
        for (const TrimCurve& tc : patch.domain.curves()) {
            json t = curve_json(tc.curve);
            t["keep_left"] = tc.keep_left;
            trims.push_back(t);
        }
        e["trim_curves"] = trims;
        jp.push_back(e);
    }
    j["patches"] = jp;

    json ji = json::array();
    for (const InterfaceDef& d : model.interfaces)
        ji.push_back({{"patch_a", d.patch_a},
                      {"patch_b", d.patch_b},
                      {"preimage_a", curve_json(d.preimage_a)},
                      {"preimage_b", curve_json(d.preimage_b)},
                      {"active", d.active}});
    j["interfaces"] = ji;

    json jc = json::array();
    for (const CrossPointDef& c : model.cross_points) {
        json inc = json::array();
        for (const auto& [p, uv] : c.incidents) inc.push_back(json::array({p, uv[0], uv[1]}));
        jc.push_back({{"incidents", inc}});
    }
    j["cross_points"] = jc;
    return j;
}

LoadedModel model_from_json(const json& j) {
    if (!j.contains("version") || j.at("version").get<int>() != kFormatVersion)
        throw std::runtime_error("model format: unsupported version");

    std::vector<Patch> patches;
    for (const auto& e : j.at("patches")) {
        SplineSpace gspace = space_from_json(e.at("geometry"));
        std::vector<Vec3> cps;
        for (const auto& c : e.at("geometry").at("control_points"))
            cps.emplace_back(c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>());
        SurfaceMap geometry(std::move(gspace), std::move(cps));
        SplineSpace space = space_from_json(e.at("space"));
        Material mat = material_from_json(e.at("material"));
        std::vector<TrimCurve> trims;
        if (e.contains("trim_curves"))
            for (const auto& t : e.at("trim_curves"))
                trims.push_back({curve_from_json(t), t.value("keep_left", true)});
        if (trims.empty())
            patches.emplace_back(std::move(geometry), std::move(space), std::move(mat));
        else
            patches.emplace_back(std::move(geometry), std::move(space), std::move(trims), std::move(mat));
    }

    MultiPatchModel model;
    if (j.contains("interfaces"))
        for (const auto& d : j.at("interfaces"))
            model.interfaces.push_back({d.at("patch_a").get<int>(), d.at("patch_b").get<int>(),
                                        curve_from_json(d.at("preimage_a")),
                                        curve_from_json(d.at("preimage_b")), d.value("active", -1)});
    if (j.contains("cross_points"))
        for (const auto& c : j.at("cross_points")) {
            CrossPointDef cp;
            for (const auto& inc : c.at("incidents"))
                cp.incidents.emplace_back(inc.at(0).get<int>(),
                                          Vec2(inc.at(1).get<double>(), inc.at(2).get<double>()));
            model.cross_points.push_back(std::move(cp));
        }
    return {PatchSet(std::move(patches)), std::move(model)};
}

}  // namespace

LoadedModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    json j;
    in >> j;
    return model_from_json(j);
}

LoadedModel read_model_from_string(const std::string& json_text) {
    return model_from_json(json::parse(json_text));
}

void write_model(const PatchSet& patches, const MultiPatchModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model output " + path);
    out << model_json(patches, model).dump(2) << '\n';
}

std::string model_to_string(const PatchSet& patches, const MultiPatchModel& model) {
    return model_json(patches, model).dump(2);
}

}  // namespace kl
