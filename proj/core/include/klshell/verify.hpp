#pragma once

#include <iosfwd>

namespace kl {

/// Runs the fast property suite (spline identities, trimming areas,
/// projection properties, mechanics invariants), printing one pass/fail
/// line per check. Returns true when everything passes.
bool verify_properties(std::ostream& out);

}  // namespace kl
