#include "ritzcli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ritzcli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const int r = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const std::uint64_t r = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail(line, "expected a nonnegative integer, got '" + v + "'");
  }
}

double parse_real(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(parse_int(item, line));
  if (out.empty()) fail(line, "expected a comma-separated list");
  return out;
}

std::vector<double> parse_real_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_real(item, line));
  if (out.empty()) fail(line, "expected a comma-separated list");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string stripped = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (stripped.empty()) continue;

    if (stripped.front() == '[') {
      if (stripped.back() != ']') fail(line, "unterminated section header");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section != "problem" && section != "train" && section != "output" &&
          section != "study" && section != "pou" && section != "gradcheck" &&
          section != "bounds") {
        fail(line, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (section.empty()) fail(line, "key '" + key + "' appears before any [section]");

    if (section == "problem") {
      if (key == "bc") {
        if (value != "robin" && value != "neumann" && value != "dirichlet") {
          fail(line, "bc must be robin, neumann, or dirichlet");
        }
        cfg.problem.bc = value;
      } else if (key == "beta") {
        cfg.problem.beta = parse_real(value, line);
      } else if (key == "d") {
        cfg.problem.d = parse_int(value, line);
      } else if (key == "domain") {
        if (value != "hypercube" && value != "ball") {
          fail(line, "domain must be hypercube or ball");
        }
        cfg.problem.domain = value;
      } else if (key == "solution") {
        cfg.problem.solution = value;
      } else if (key == "w") {
        cfg.problem.w = value;
      } else if (key == "f") {
        cfg.problem.f = value;
      } else if (key == "g") {
        cfg.problem.g = value;
      } else {
        fail(line, "unknown key '" + key + "' in [problem]");
      }
    } else if (section == "train") {
      if (key == "A") {
        cfg.train.subnets = parse_int(value, line);
      } else if (key == "m1") {
        cfg.train.m1 = parse_int(value, line);
      } else if (key == "m2") {
        cfg.train.m2 = parse_int(value, line);
      } else if (key == "n") {
        cfg.train.n = parse_int(value, line);
      } else if (key == "m") {
        cfg.train.m = parse_int(value, line);
      } else if (key == "eta") {
        cfg.train.eta = parse_real(value, line);
      } else if (key == "T") {
        cfg.train.iterations = parse_int(value, line);
      } else if (key == "init_bound") {
        cfg.train.init_bound = parse_real(value, line);
      } else if (key == "inner_radius") {
        cfg.train.inner_radius = parse_real(value, line);
      } else if (key == "outer_budget") {
        cfg.train.outer_budget = parse_real(value, line);
      } else if (key == "seed") {
        cfg.train.seed = parse_u64(value, line);
      } else if (key == "guard") {
        cfg.train.guard = parse_bool(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [train]");
      }
    } else if (section == "output") {
      if (key == "dir") {
        cfg.output.dir = value;
      } else if (key == "formats") {
        cfg.output.formats = value;
      } else {
        fail(line, "unknown key '" + key + "' in [output]");
      }
    } else if (section == "study") {
      if (key == "n_list") {
        cfg.study.n_list = parse_int_list(value, line);
      } else if (key == "reps") {
        cfg.study.repetitions = parse_int(value, line);
      } else if (key == "eval_points") {
        cfg.study.eval_points = parse_int(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [study]");
      }
    } else if (section == "pou") {
      if (key == "N_list") {
        cfg.pou.n_list = parse_int_list(value, line);
      } else if (key == "eps_list") {
        cfg.pou.eps_list = parse_real_list(value, line);
      } else if (key == "d_list") {
        cfg.pou.d_list = parse_int_list(value, line);
      } else if (key == "k") {
        cfg.pou.smoothness = parse_int(value, line);
      } else if (key == "s") {
        cfg.pou.fit_order = parse_int(value, line);
      } else if (key == "samples_per_cell") {
        cfg.pou.samples_per_cell = parse_int(value, line);
      } else if (key == "seed") {
        cfg.pou.seed = parse_u64(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [pou]");
      }
    } else if (section == "gradcheck") {
      if (key == "configurations") {
        cfg.gradcheck.configurations = parse_int(value, line);
      } else if (key == "seed") {
        cfg.gradcheck.seed = parse_u64(value, line);
      } else if (key == "corrupt") {
        cfg.gradcheck.corrupt = parse_bool(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [gradcheck]");
      }
    } else if (section == "bounds") {
      if (key == "n") {
        cfg.bounds.n = parse_real(value, line);
      } else if (key == "d") {
        cfg.bounds.d = parse_int(value, line);
      } else if (key == "B_inn") {
        cfg.bounds.b_inn = parse_real(value, line);
      } else if (key == "B_out") {
        cfg.bounds.b_out = parse_real(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [bounds]");
      }
    }
  }

  if (cfg.problem.d < 1) throw ConfigError("config: problem.d must be >= 1");
  if (cfg.train.n < 1 || (cfg.train.m != 0 && cfg.train.m < 1)) {
    throw ConfigError("config: sample counts n, m must be >= 1");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace ritzcli
