#include "fraclangevin_cli/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fraclangevin/errors.hpp"

namespace fraclangevin::cli {
namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>> kAllowed = {
    {"problem", {"alpha", "beta", "gamma", "T", "t0"}},
    {"spectrum", {"kind", "N", "c", "p", "values"}},
    {"data",
     {"phi", "psi", "f", "omega", "f_mode", "f_times", "phi_tail", "psi_tail", "f_tail"}},
    {"output", {"points", "nodes"}},
    {"tolerances", {"verify", "nonlocal", "steps"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(where + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::size_t to_count(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(where + ": '" + s + "' is not a non-negative integer");
  }
  return v;
}

std::vector<double> to_list(const std::string& raw, const std::string& where) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const auto comma = raw.find(',', start);
    const auto piece = raw.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start);
    out.push_back(to_number(piece, where));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

class Section {
 public:
  Section(const ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::string raw(const std::string& key) const {
    if (!has(key)) throw ParseError("missing key [" + name_ + "] " + key);
    return tree_->get<std::string>(key);
  }
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }
  double number(const std::string& key) const { return to_number(raw(key), where(key)); }
  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

 private:
  const ptree* tree_;
  std::string name_;
};

const ptree* child(const ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

void check_keys(const ptree& root) {
  for (const auto& [section, body] : root) {
    const auto allowed = kAllowed.find(section);
    if (allowed == kAllowed.end()) throw ParseError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (allowed->second.count(key)) continue;
      const bool sampled_row = section == "data" && key.rfind("f_k", 0) == 0;
      if (!sampled_row) throw ParseError("unknown key [" + section + "] " + key);
    }
  }
}

spectral::SpectrumSpec parse_spectrum(const Section& s) {
  const std::string kind = trim(s.raw("kind"));
  if (kind == "power_law") {
    return spectral::SpectrumSpec::power_law(s.number("c"), s.number("p"),
                                             to_count(s.raw("N"), s.where("N")));
  }
  if (kind == "dirichlet_laplacian") {
    if (s.has("c") || s.has("p") || s.has("values")) {
      throw ParseError("[spectrum] dirichlet_laplacian takes only N");
    }
    return spectral::SpectrumSpec::dirichlet_laplacian(to_count(s.raw("N"), s.where("N")));
  }
  if (kind == "explicit") {
    if (s.has("c") || s.has("p")) throw ParseError("[spectrum] explicit takes values and N");
    auto values = to_list(s.raw("values"), s.where("values"));
    if (s.has("N")) {
      return spectral::SpectrumSpec::explicit_list(std::move(values),
                                                   to_count(s.raw("N"), s.where("N")));
    }
    return spectral::SpectrumSpec::explicit_list(std::move(values));
  }
  throw ParseError("[spectrum] kind must be power_law, explicit or dirichlet_laplacian");
}

spectral::CoeffVector parse_coeffs(const Section& s, const std::string& key, std::size_t n) {
  const std::string text = s.raw(key);
  if (const auto rule = parse_decay_rule(text)) {
    return spectral::decay_coefficients(rule->c, rule->p, n);
  }
  auto values = to_list(text, s.where(key));
  if (values.size() != n) {
    throw ParseError(s.where(key) + " lists " + std::to_string(values.size()) +
                     " coefficients, spectrum N is " + std::to_string(n));
  }
  return spectral::CoeffVector(std::move(values));
}

forward::DataDecay parse_tail(const Section& s, const std::string& key) {
  if (!s.has(key)) return {};
  const auto rule = parse_decay_rule(s.raw(key));
  if (!rule) throw ParseError(s.where(key) + " must be a decay rule c/k^p");
  return *rule;
}

}  // namespace

std::optional<forward::DataDecay> parse_decay_rule(const std::string& text) {
  static const std::regex rule(R"(\s*([^/\s]+)\s*/\s*k\s*\^\s*(\S+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, rule)) return std::nullopt;
  forward::DataDecay d;
  d.c = to_number(m[1].str(), "decay rule");
  d.p = to_number(m[2].str(), "decay rule");
  return d;
}

inverse::InverseSpec ProblemFile::inverse_spec() const {
  if (!t0) throw ParseError("inverse problem needs [problem] t0");
  if (!omega) throw ParseError("inverse problem needs [data] omega");
  inverse::InverseSpec spec;
  spec.forward = forward;
  spec.forward.source = forward::ConstantInTime{spectral::CoeffVector::zeros(forward.modes())};
  spec.t0 = *t0;
  spec.omega = *omega;
  return spec;
}

ProblemFile parse_problem(std::istream& in) {
  ptree root;
  try {
    boost::property_tree::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  check_keys(root);
  const Section problem(child(root, "problem"), "problem");
  const Section spectrum(child(root, "spectrum"), "spectrum");
  const Section data(child(root, "data"), "data");
  const Section output(child(root, "output"), "output");
  const Section tolerances(child(root, "tolerances"), "tolerances");

  ProblemFile pf;
  auto& fw = pf.forward;
  fw.alpha = problem.number("alpha");
  fw.beta = problem.number("beta");
  fw.gamma = problem.number("gamma");
  fw.T = problem.number("T");
  pf.t0 = problem.optional_number("t0");

  try {
    fw.spectrum = parse_spectrum(spectrum);
  } catch (const DomainError& e) {
    throw ParseError(std::string("[spectrum] ") + e.what());
  }
  const std::size_t n = fw.modes();
  fw.phi = parse_coeffs(data, "phi", n);
  fw.psi = parse_coeffs(data, "psi", n);
  if (data.has("omega")) pf.omega = parse_coeffs(data, "omega", n);

  const std::string mode = data.has("f_mode") ? trim(data.raw("f_mode")) : "constant";
  std::set<std::string> rows;
  for (std::size_t i = 1; i <= n; ++i) rows.insert("f_k" + std::to_string(i));
  if (mode == "constant") {
    if (data.has("f_times")) throw ParseError("[data] f_times needs f_mode = sampled");
    if (pf.t0 && !data.has("f")) {
      fw.source = forward::ConstantInTime{spectral::CoeffVector::zeros(n)};
    } else {
      fw.source = forward::ConstantInTime{parse_coeffs(data, "f", n)};
    }
  } else if (mode == "sampled") {
    if (data.has("f")) throw ParseError("[data] f_mode = sampled uses f_times and f_k<i> rows");
    const auto times = to_list(data.raw("f_times"), data.where("f_times"));
    std::vector<std::vector<double>> table;
    for (std::size_t i = 1; i <= n; ++i) {
      const std::string key = "f_k" + std::to_string(i);
      auto row = to_list(data.raw(key), data.where(key));
      if (row.size() != times.size()) {
        throw ParseError(data.where(key) + " has " + std::to_string(row.size()) +
                         " samples, f_times has " + std::to_string(times.size()));
      }
      table.push_back(std::move(row));
    }
    try {
      fw.source = forward::SampledSource::from_table(times, table);
    } catch (const DomainError& e) {
      throw ParseError(std::string("[data] ") + e.what());
    }
  } else {
    throw ParseError("[data] f_mode must be constant or sampled");
  }
  if (const ptree* d = child(root, "data")) {
    for (const auto& [key, value] : *d) {
      if (key.rfind("f_k", 0) == 0 && (mode != "sampled" || !rows.count(key))) {
        throw ParseError("unexpected key [data] " + key);
      }
    }
  }

  pf.tail.phi = parse_tail(data, "phi_tail");
  pf.tail.psi = parse_tail(data, "psi_tail");
  pf.tail.f = parse_tail(data, "f_tail");

  if (output.has("points") && output.has("nodes")) {
    throw ParseError("[output] give either points or nodes");
  }
  if (output.has("nodes")) {
    pf.grid = to_list(output.raw("nodes"), output.where("nodes"));
  } else {
    const std::size_t points =
        output.has("points") ? to_count(output.raw("points"), output.where("points")) : 11;
    if (points < 2) throw ParseError("[output] points must be at least 2");
    pf.grid.resize(points);
    for (std::size_t m = 0; m < points; ++m) {
      pf.grid[m] = fw.T * static_cast<double>(m) / static_cast<double>(points - 1);
    }
    pf.grid.back() = fw.T;
  }

  if (tolerances.has("verify")) pf.tolerances.verify = tolerances.number("verify");
  if (tolerances.has("nonlocal")) pf.tolerances.nonlocal = tolerances.number("nonlocal");
  if (tolerances.has("steps")) {
    pf.tolerances.steps = to_count(tolerances.raw("steps"), tolerances.where("steps"));
  }

  try {
    fw.validate();
    if (pf.t0 && pf.omega) pf.inverse_spec().validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return pf;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path.string());
  return parse_problem(in);
}

}  // namespace fraclangevin::cli
