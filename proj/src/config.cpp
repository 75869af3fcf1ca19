#include "numerovlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "numerovlab/csv.hpp"

namespace nlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s, std::string_view key) {
  // Accept either a plain real or a p/q rational (handy for sigma = 1/12).
  if (s.find('/') != std::string_view::npos) return to_double(parse_rational(s));
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("config: malformed number for '" + std::string(key) + "': '" +
                                std::string(s) + "'");
  return v;
}

long long parse_int(std::string_view s, std::string_view key) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("config: malformed integer for '" + std::string(key) + "': '" +
                                std::string(s) + "'");
  return v;
}

std::vector<double> parse_real_list(std::string_view s, std::string_view key) {
  std::vector<double> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(parse_real(tok, key));
  return out;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = std::string(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string where = section + "." + key;

    if (section == "mesh") {
      if (key == "file") {
        cfg.mesh_file = std::string(value);
      } else if (key == "steps") {
        const auto slash = value.rfind('/');
        if (slash == std::string_view::npos)
          throw std::invalid_argument("config: mesh.steps needs '<n1> <n2> ... / <d>'");
        std::istringstream nums{std::string(value.substr(0, slash))};
        std::vector<long long> steps;
        std::string tok;
        while (nums >> tok) steps.push_back(parse_int(tok, where));
        cfg.inline_steps = std::move(steps);
        cfg.inline_denominator = parse_int(trim(value.substr(slash + 1)), where);
      } else if (key == "uniform") {
        cfg.uniform_intervals = static_cast<int>(parse_int(value, where));
      } else if (key == "X") {
        cfg.domain_length = parse_rational(value);
      } else if (key == "K") {
        cfg.multiplicity = static_cast<int>(parse_int(value, where));
      } else {
        throw std::invalid_argument("config: unknown key '" + where + "'");
      }
    } else if (section == "scheme") {
      if (key == "a") cfg.a = parse_real(value, where);
      else if (key == "sigma") cfg.sigma = parse_real(value, where);
      else throw std::invalid_argument("config: unknown key '" + where + "'");
    } else if (section == "time") {
      if (key == "tau") cfg.tau = parse_real(value, where);
      else if (key == "tau_rule") cfg.tau_rule = TauRule::parse(value);
      else if (key == "T") cfg.horizons = parse_real_list(value, where);
      else if (key == "M") cfg.steps_override = parse_int(value, where);
      else if (key == "snapshots") cfg.snapshot_times = parse_real_list(value, where);
      else throw std::invalid_argument("config: unknown key '" + where + "'");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = std::string(value);
      else if (key == "mode") {
        if (value == "fixed-M") cfg.fixed_steps_mode = true;
        else if (value == "fixed-tau") cfg.fixed_steps_mode = false;
        else throw std::invalid_argument("config: output.mode must be fixed-M or fixed-tau");
      } else {
        throw std::invalid_argument("config: unknown key '" + where + "'");
      }
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any known section");
    }
  }
  return cfg;
}

std::string ExperimentConfig::serialize() const {
  std::string out = "[mesh]\n";
  if (mesh_file) out += "file = " + *mesh_file + "\n";
  if (inline_steps) {
    out += "steps =";
    for (long long s : *inline_steps) out += ' ' + std::to_string(s);
    out += " / " + std::to_string(inline_denominator.value_or(0)) + "\n";
  }
  if (uniform_intervals) out += "uniform = " + std::to_string(*uniform_intervals) + "\n";
  out += "X = " + format_rational(domain_length) + "\n";
  out += "K = " + std::to_string(multiplicity) + "\n";
  out += "\n[scheme]\n";
  out += "a = " + format_double(a) + "\n";
  out += "sigma = " + format_double(sigma) + "\n";
  out += "\n[time]\n";
  if (tau) out += "tau = " + format_double(*tau) + "\n";
  if (tau_rule) out += "tau_rule = " + tau_rule->format() + "\n";
  if (!horizons.empty()) {
    out += "T =";
    for (double t : horizons) out += ' ' + format_double(t);
    out += "\n";
  }
  if (steps_override) out += "M = " + std::to_string(*steps_override) + "\n";
  if (!snapshot_times.empty()) {
    out += "snapshots =";
    for (double t : snapshot_times) out += ' ' + format_double(t);
    out += "\n";
  }
  out += "\n[output]\n";
  out += "dir = " + out_dir + "\n";
  out += std::string("mode = ") + (fixed_steps_mode ? "fixed-M" : "fixed-tau") + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open config file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::save(const std::filesystem::path& file) const {
  write_text_atomic(file, serialize());
}

Mesh ExperimentConfig::base_mesh() const {
  const int sources = (mesh_file ? 1 : 0) + (inline_steps ? 1 : 0) + (uniform_intervals ? 1 : 0);
  if (sources != 1)
    throw std::invalid_argument("config: exactly one mesh source (file, steps, uniform) must be "
                                "set; found " +
                                std::to_string(sources));
  if (mesh_file) return Mesh::load(*mesh_file);
  if (inline_steps) {
    if (!inline_denominator)
      throw std::invalid_argument("config: inline steps need a denominator");
    return Mesh::from_steps(*inline_steps, *inline_denominator, domain_length);
  }
  return Mesh::uniform(domain_length, *uniform_intervals);
}

TauRule ExperimentConfig::schedule() const {
  if (tau && tau_rule)
    throw std::invalid_argument("config: set either tau or tau_rule, not both");
  if (tau) return TauRule::fixed(*tau);
  if (tau_rule) return *tau_rule;
  throw std::invalid_argument("config: a time step is required (tau or tau_rule)");
}

} // namespace nlab
