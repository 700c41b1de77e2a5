#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "klshell/convergence.hpp"
#include "klshell/model_io.hpp"
#include "klshell/verify.hpp"

namespace {

struct RunConfig {
    std::string case_id;
    std::string strategy = "projected";
    std::string beta = "pp1";
    int degree = 2;
    int levels = -1;
    double thickness = -1.0;
    std::string out = "out";
    bool vtk = false;
    bool dump_matrix = false;
    kl::CaseConfig geometry;
};

kl::PenaltyStrategy make_strategy(const RunConfig& cfg) {
    kl::PenaltyStrategy s;
    if (cfg.strategy == "classic")
        s.method = kl::PenaltyMethod::Classic;
    else if (cfg.strategy == "scaled")
        s.method = kl::PenaltyMethod::Scaled;
    else if (cfg.strategy == "projected")
        s.method = kl::PenaltyMethod::Projected;
    else
        throw CLI::ValidationError("strategy must be classic, scaled or projected");
    if (cfg.beta == "pm1")
        s.beta_offset = -1;
    else if (cfg.beta == "p")
        s.beta_offset = 0;
    else if (cfg.beta == "pp1")
        s.beta_offset = 1;
    else
        throw CLI::ValidationError("beta must be pm1, p or pp1");
    return s;
}

// keys in the config file override command-line flags
void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("case")) cfg.case_id = j["case"].get<std::string>();
    if (j.contains("strategy")) cfg.strategy = j["strategy"].get<std::string>();
    if (j.contains("beta")) cfg.beta = j["beta"].get<std::string>();
    if (j.contains("degree")) cfg.degree = j["degree"].get<int>();
    if (j.contains("levels")) cfg.levels = j["levels"].get<int>();
    if (j.contains("thickness")) cfg.thickness = j["thickness"].get<double>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("vtk")) cfg.vtk = j["vtk"].get<bool>();
    if (j.contains("scordelis_load")) cfg.geometry.scordelis_load = j["scordelis_load"].get<double>();
    if (j.contains("lbeam_length")) cfg.geometry.lbeam_length = j["lbeam_length"].get<double>();
    if (j.contains("lbeam_leg")) cfg.geometry.lbeam_leg = j["lbeam_leg"].get<double>();
    if (j.contains("cylinder_radius")) cfg.geometry.cylinder_radius = j["cylinder_radius"].get<double>();
    if (j.contains("cylinder_height")) cfg.geometry.cylinder_height = j["cylinder_height"].get<double>();
    if (j.contains("cylinder_span_deg"))
        cfg.geometry.cylinder_span_deg = j["cylinder_span_deg"].get<double>();
}

int run_command(const RunConfig& cfg) {
    const kl::BenchmarkCase bench = kl::find_case(cfg.case_id, cfg.geometry);
    const kl::PenaltyStrategy strategy = make_strategy(cfg);
    const int levels = (cfg.levels > 0) ? cfg.levels : bench.default_levels;
    const double thickness = (cfg.thickness > 0) ? cfg.thickness : bench.thickness_variants.front();

    std::filesystem::create_directories(cfg.out);
    kl::RunOptions options;
    options.out_dir = cfg.out;
    options.write_vtk = cfg.vtk;
    options.dump_matrix = cfg.dump_matrix;

    const kl::ConvergenceReport report =
        kl::run_convergence(bench, strategy, cfg.degree, levels, thickness, options);

    const std::string base = cfg.out + "/" + bench.id + "_" + kl::strategy_label(strategy) + "_" +
                             kl::beta_label(strategy.beta_offset) + "_p" + std::to_string(cfg.degree);
    kl::write_csv(report, base + ".csv");
    std::ofstream summary(base + "_summary.txt");
    kl::write_summary({report}, summary);
    kl::write_summary({report}, std::cout);
    std::cout << "wrote " << base << ".csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-patch Kirchhoff-Love shell benchmark driver"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;

    CLI::App* run = app.add_subcommand("run", "run a convergence study");
    run->add_option("--case", cfg.case_id, "benchmark id (see `bench list`)")->required();
    run->add_option("--strategy", cfg.strategy, "classic | scaled | projected");
    run->add_option("--beta", cfg.beta, "penalty exponent: pm1 | p | pp1");
    run->add_option("--degree", cfg.degree, "spline degree 2..4");
    run->add_option("--levels", cfg.levels, "refinement levels (default per case)");
    run->add_option("--thickness", cfg.thickness, "thickness override [m]");
    run->add_option("--out", cfg.out, "output directory");
    run->add_flag("--vtk", cfg.vtk, "write displacement fields per level");
    run->add_flag("--dump-matrix", cfg.dump_matrix, "dump the coarsest stiffness matrix");
    run->add_option("--config", config_file, "JSON config file; its keys override flags");

    CLI::App* list = app.add_subcommand("list", "list the benchmark catalogue");

    CLI::App* verify = app.add_subcommand("verify", "run the property suite");

    CLI::App* dump = app.add_subcommand("dump", "write a case's model file");
    std::string dump_case, dump_out = "model.json";
    int dump_level = 0, dump_degree = 2;
    dump->add_option("--case", dump_case, "benchmark id")->required();
    dump->add_option("--out", dump_out, "output path");
    dump->add_option("--level", dump_level, "refinement level");
    dump->add_option("--degree", dump_degree, "spline degree");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const kl::BenchmarkCase& c : kl::case_catalogue()) {
                std::cout << c.id << "  (t =";
                for (double t : c.thickness_variants) std::cout << ' ' << t;
                std::cout << ")\n    " << c.description << "\n";
            }
            return 0;
        }
        if (verify->parsed()) return kl::verify_properties(std::cout) ? 0 : 1;
        if (dump->parsed()) {
            const kl::BenchmarkCase bench = kl::find_case(dump_case);
            kl::CaseLevel lvl = bench.build(dump_level, dump_degree, bench.thickness_variants.front());
            kl::write_model(lvl.patches, lvl.model, dump_out);
            std::cout << "wrote " << dump_out << "\n";
            return 0;
        }
        if (run->parsed()) {
            if (!config_file.empty()) apply_config_file(cfg, config_file);
            return run_command(cfg);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
