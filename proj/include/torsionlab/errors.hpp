#pragma once

#include <stdexcept>
#include <string>

namespace torsionlab {

// Base for everything this library throws on purpose. Anything escaping a
// public entry point that is not a torsionlab::error is a bug.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mixing elements of Q(sqrt(-1)) with Q(sqrt(-3)) and friends.
struct field_mismatch_error : error {
  using error::error;
};

struct division_by_zero_error : error {
  using error::error;
};

// An operation got 0 (or another excluded value) where its contract forbids it,
// e.g. the square class of 0.
struct zero_input_error : error {
  using error::error;
};

struct parse_error : error {
  using error::error;
};

// M*N*(M-N) = 0: the cubic has a repeated root, not an elliptic curve.
struct singular_curve_error : error {
  using error::error;
};

// A caller violated a documented precondition that we can detect cheaply.
struct precondition_error : error {
  using error::error;
};

// halve() was asked to halve a point whose lift quantities are not all
// squares in the target field.
struct no_lift_error : error {
  using error::error;
};

// Halving chain walked past the configured order cap (default 32,
// TORSIONLAB_MAX_CHAIN overrides).
struct cap_exceeded_error : error {
  using error::error;
};

// A computed torsion shape falls outside the proven catalog for the field.
// Over Q(i) and Q(sqrt(-3)) this can only mean an internal bug.
struct catalog_violation_error : error {
  using error::error;
};

// analyze(..., strict) found a result that contradicts the classification
// tables.
struct conformance_violation_error : error {
  using error::error;
};

// Curve generation exhausted its search space without producing a curve.
struct empty_generation_error : error {
  using error::error;
};

// No (a,b,c) parametrization exists for the given order-3 point.
struct no_parametrization_error : error {
  using error::error;
};

}  // namespace torsionlab
