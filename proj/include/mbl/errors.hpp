#pragma once

#include <stdexcept>
#include <string>

namespace mbl {

// Error taxonomy. The CLI maps these onto exit codes: config_error -> 2,
// size_cap_error -> 3, everything else that escapes -> 2.
struct mbl_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad family parameters (non-increasing thresholds, composite modulus, ...).
struct invalid_family_error : mbl_error {
  using mbl_error::mbl_error;
};

// Value outside a declared domain (input point, label, pattern entry).
struct domain_error : mbl_error {
  using mbl_error::mbl_error;
};

// Enumeration or solver cap exceeded.
struct size_cap_error : mbl_error {
  using mbl_error::mbl_error;
};

// Malformed query or guess for the protocol at hand.
struct query_error : mbl_error {
  using mbl_error::mbl_error;
};

// Feedback that would empty the version space.
struct feedback_error : mbl_error {
  using mbl_error::mbl_error;
};

// Verify-module precondition violated (zero coordinate, scalar multiple, ...).
struct precondition_error : mbl_error {
  using mbl_error::mbl_error;
};

// Experiment/CLI configuration problem.
struct config_error : mbl_error {
  using mbl_error::mbl_error;
};

}  // namespace mbl
