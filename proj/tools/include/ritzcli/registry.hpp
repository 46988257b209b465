#pragma once

#include <optional>

#include "ritz/problem.hpp"
#include "ritzcli/config.hpp"

namespace ritzcli {

/// Resolves the configured field id: "zero", "one", or "const:<value>".
ritz::ScalarField resolve_field(const std::string& id);

/// Returns the constant value of a field id, or throws when the id is not
/// constant (used where closed-form solutions need constant data).
double constant_of(const std::string& id);

/// Builds the problem block. Known solution ids:
///   robin1d_const  exact 1d Robin/Dirichlet solution for constant w, f
///   sinpi          product of sin(pi x_i), manufactured data
///   quadratic1d    x^2 on the interval, manufactured data
///   one            constant 1, manufactured data
///   none           raw fields from the w/f/g ids, no exact solution
ritz::ProblemSpec resolve_problem(const RunConfig& cfg);

}  // namespace ritzcli
