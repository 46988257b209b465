#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ritzcli {

/// Raised with the offending line number and field on any parse problem.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat sectioned key-value run configuration. Unknown sections or keys are
/// hard errors so a typo can never silently fall back to a default.
struct RunConfig {
  struct Problem {
    std::string bc = "robin";            // robin | neumann | dirichlet
    double beta = 1.0;
    int d = 1;
    std::string domain = "hypercube";    // hypercube | ball
    std::string solution = "robin1d_const";
    std::string w = "one";               // zero | one | const:<value>
    std::string f = "one";
    std::string g = "zero";
  } problem;

  struct Train {
    int subnets = 16;        // A
    int m1 = 0;              // 0 -> default 5d
    int m2 = 0;              // 0 -> default binom(2d+1, d+1)
    int n = 2048;
    int m = 0;               // 0 -> m = n
    double eta = 1.0;
    int iterations = 2000;   // T
    double init_bound = 1.0;
    double inner_radius = 10.0;
    double outer_budget = 50.0;
    std::uint64_t seed = 1;
    bool guard = true;       // halving guard discovers the step from eta
  } train;

  struct Output {
    std::string dir = "out";
    std::string formats = "csv,json";
  } output;

  struct Study {
    std::vector<int> n_list{256, 1024, 4096};
    int repetitions = 3;
    int eval_points = 20000;
  } study;

  struct Pou {
    std::vector<int> n_list{4, 8};
    std::vector<double> eps_list{0.1, 0.01};
    std::vector<int> d_list{1, 2};
    int smoothness = 1;
    int fit_order = 2;  // s: fits use degree s-1
    int samples_per_cell = 50;
    std::uint64_t seed = 1;
  } pou;

  struct GradCheck {
    int configurations = 20;
    std::uint64_t seed = 20240817;
    bool corrupt = false;  // negative-control hook; forces a failure
  } gradcheck;

  struct Bounds {
    double n = 2048;
    int d = 1;
    double b_inn = 1.0;
    double b_out = 1.0;
  } bounds;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace ritzcli
