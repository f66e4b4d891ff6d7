#include <gtube/run_config.hpp>

#include <gtube/errors.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gtube {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (...) {
  }
  throw DomainError("config: '" + key + "' expects a number, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (...) {
  }
  throw DomainError("config: '" + key + "' expects an integer, got '" + v + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

RVec parse_real_list(const std::string& s) {
  RVec out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_real("lambda_grid", item));
  }
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "model") model = v;
  else if (key == "dim") dim = static_cast<int>(parse_int(key, v));
  else if (key == "tau") tau = parse_real(key, v);
  else if (key == "eps") eps = parse_real(key, v);
  else if (key == "lambda_grid") lambda_grid = parse_real_list(v);
  else if (key == "rho") rho = parse_real(key, v);
  else if (key == "per_axis") per_axis = static_cast<int>(parse_int(key, v));
  else if (key == "kernel") kernel = v;
  else if (key == "out") out = v;
  else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(key, v));
  else if (key == "threads") threads = static_cast<int>(parse_int(key, v));
  else if (key == "lambda_max") lambda_max = parse_real(key, v);
  else if (key == "rel_tail") rel_tail = parse_real(key, v);
  else throw DomainError("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open '" + path + "'");
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return c;
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::string grid;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) grid += (i ? "," : "") + format_real(lambda_grid[i]);
  return {{"model", model},
          {"dim", std::to_string(dim)},
          {"tau", format_real(tau)},
          {"eps", format_real(eps)},
          {"lambda_grid", grid},
          {"rho", format_real(rho)},
          {"per_axis", std::to_string(per_axis)},
          {"kernel", kernel},
          {"out", out},
          {"seed", std::to_string(seed)},
          {"lambda_max", format_real(lambda_max)},
          {"rel_tail", format_real(rel_tail)}};
}

void RunConfig::validate() const {
  if (model != "circle" && model != "torus") throw DomainError("config: model must be circle or torus");
  if (dim < 1) throw DimensionError("config: dim must be >= 1");
  if (model == "circle" && dim != 1) throw DimensionError("config: circle requires dim = 1");
  if (!(tau > 0)) throw DomainError("config: tau must be positive");
  if (!(eps > 0)) throw DomainError("config: eps must be positive");
  if (!(rho > 0)) throw DomainError("config: rho must be positive");
  if (per_axis < 2) throw DomainError("config: per_axis must be >= 2");
  for (double l : lambda_grid)
    if (!(l >= 1)) throw DomainError("config: lambda values must be >= 1");
  if (kernel != "smoothed" && kernel != "toeplitz" && kernel != "both")
    throw DomainError("config: kernel must be smoothed, toeplitz or both");
  if (!(rel_tail > 0)) throw DomainError("config: rel_tail must be positive");
}

}  // namespace gtube
