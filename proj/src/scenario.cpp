#include "hotent/scenario.hpp"

#include "hotent/entanglement.hpp"
#include "hotent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace hotent {

std::string to_string(ScenarioKind k) {
  switch (k) {
  case ScenarioKind::Fig2Comparison:
    return "fig2_comparison";
  case ScenarioKind::Fig3Nondegenerate:
    return "fig3_nondegenerate";
  case ScenarioKind::Fig4Degenerate:
    return "fig4_degenerate";
  case ScenarioKind::Fig5Thermal:
    return "fig5_thermal";
  case ScenarioKind::CustomSweep:
    return "custom_sweep";
  }
  return "?";
}

std::string to_string(GeneratorKind k) {
  switch (k) {
  case GeneratorKind::FullSecular:
    return "full_secular";
  case GeneratorKind::FilteredNondegenerate:
    return "filtered_nondegenerate";
  case GeneratorKind::FilteredDegenerate:
    return "filtered_degenerate";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Documents

namespace {

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::vector<std::string> split_path(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (const auto& p : parts)
    if (p.empty()) throw ConfigError(key, "empty component in key path");
  return parts;
}

bool is_index(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

} // namespace

int locate_key_line(const std::string& text, const std::string& key_path) {
  if (key_path.empty()) return 0;
  std::size_t pos = 0;
  int line = 0;
  for (const std::string& part : split_path(key_path)) {
    if (is_index(part)) continue;
    const std::size_t hit = text.find("\"" + part + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit + part.size() + 2;
    line = line_of(text, hit);
  }
  return line;
}

json parse_document(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw InvalidConfiguration(origin + ":" + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw InvalidConfiguration(origin + ":1: top level must be an object");
  if (doc.contains("manifest_version")) {
    if (!doc.contains("config") || !doc["config"].is_object())
      throw InvalidConfiguration(origin + ": manifest has no embedded config");
    return doc["config"];
  }
  return doc;
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfiguration("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

std::pair<std::string, json> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw InvalidConfiguration("expected key=value, got '" + text + "'");
  const std::string key = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  return {key, value};
}

void apply_override(json& doc, const std::string& key, const json& value) {
  json* node = &doc;
  const auto parts = split_path(key);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    const bool last = i + 1 == parts.size();
    if (node->is_array() && is_index(p)) {
      const std::size_t idx = std::stoul(p);
      if (idx >= node->size()) throw ConfigError(key, "index " + p + " is out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError(key, "'" + p + "' does not name an object field");
      node = &(*node)[p];
    }
    if (last) *node = value;
  }
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

class Reader {
public:
  Reader(const json& root, ScenarioConfig& out) : root_(root), out_(out), units_(10e9) {}

  void set_units(const UnitSystem& u) { units_ = u; }
  const UnitSystem& units() const { return units_; }

  const json* find(const std::string& path) const {
    const json* node = &root_;
    for (const std::string& p : split_path(path)) {
      if (node->is_object() && node->contains(p)) {
        node = &(*node)[p];
      } else if (node->is_array() && is_index(p) && std::stoul(p) < node->size()) {
        node = &(*node)[std::stoul(p)];
      } else {
        return nullptr;
      }
    }
    return node;
  }

  double quantity(const json& node, const std::string& path, QuantityKind kind) {
    if (node.is_number()) return node.get<double>();
    if (node.is_string()) {
      const std::string s = node.get<std::string>();
      double v = 0.0;
      try {
        v = units_.parse(s, kind);
      } catch (const InvalidConfiguration& e) {
        throw ConfigError(path, e.what());
      }
      if (s.find_first_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ") != std::string::npos)
        out_.conversions[path] = {{"input", s}, {"scaled", v}};
      return v;
    }
    throw ConfigError(path, "expected a number or a quantity string");
  }

  double quantity(const std::string& path, QuantityKind kind, std::optional<double> fallback = std::nullopt) {
    const json* n = find(path);
    if (!n || n->is_null()) {
      if (fallback) return *fallback;
      throw ConfigError(path, "missing required value");
    }
    return quantity(*n, path, kind);
  }

  std::array<double, 2> pair(const std::string& path, QuantityKind kind, std::optional<double> fallback = std::nullopt) {
    const json* n = find(path);
    if (!n || n->is_null()) {
      if (fallback) return {*fallback, *fallback};
      throw ConfigError(path, "missing required value");
    }
    if (n->is_array()) {
      if (n->size() != 2) throw ConfigError(path, "expected two entries");
      return {quantity((*n)[0], path + ".0", kind), quantity((*n)[1], path + ".1", kind)};
    }
    const double v = quantity(*n, path, kind);
    return {v, v};
  }

  std::string text(const std::string& path, const std::string& fallback) const {
    const json* n = find(path);
    if (!n || n->is_null()) return fallback;
    if (!n->is_string()) throw ConfigError(path, "expected a string");
    return n->get<std::string>();
  }

  bool flag(const std::string& path, bool fallback) const {
    const json* n = find(path);
    if (!n || n->is_null()) return fallback;
    if (!n->is_boolean()) throw ConfigError(path, "expected true or false");
    return n->get<bool>();
  }

  bool is_auto(const std::string& path) const {
    const json* n = find(path);
    return !n || n->is_null() || (n->is_string() && n->get<std::string>() == "auto");
  }

private:
  const json& root_;
  ScenarioConfig& out_;
  UnitSystem units_;
};

ScenarioKind parse_kind(const std::string& s) {
  if (s == "fig2_comparison") return ScenarioKind::Fig2Comparison;
  if (s == "fig3_nondegenerate") return ScenarioKind::Fig3Nondegenerate;
  if (s == "fig4_degenerate") return ScenarioKind::Fig4Degenerate;
  if (s == "fig5_thermal") return ScenarioKind::Fig5Thermal;
  if (s == "custom_sweep") return ScenarioKind::CustomSweep;
  throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

const std::set<std::string>& known_top_level() {
  static const std::set<std::string> keys = {"scenario", "omega_a",      "system",      "baths",
                                             "generator", "initial",     "truncation",  "integration",
                                             "time_unit", "curves",      "output_dir",  "comparison",
                                             "free_hamiltonian", "description", "convergence"};
  return keys;
}

BathSpec read_bath(Reader& r, const std::string& path, BathLabel label, bool allow_filter) {
  BathSpec b;
  b.label = label;
  b.temperature = r.quantity(path + ".temperature", QuantityKind::Temperature);
  b.coupling = r.quantity(path + ".coupling", QuantityKind::Frequency);
  const json* f = r.find(path + ".filter");
  if (f && !f->is_null()) {
    if (!allow_filter) throw ConfigError(path + ".filter", "local baths are never filtered");
    BathFilter filt;
    filt.center = std::numeric_limits<double>::quiet_NaN(); // resolved once the system is known
    if (!r.is_auto(path + ".filter.center")) filt.center = r.quantity(path + ".filter.center", QuantityKind::Frequency);
    filt.filter_coupling =
        r.is_auto(path + ".filter.kappa") ? b.coupling : r.quantity(path + ".filter.kappa", QuantityKind::Frequency);
    const std::string ls = r.text(path + ".filter.lamb_shift", "off");
    if (ls == "off") {
      filt.lamb_shift_mode = LambShiftMode::Off;
    } else if (ls == "cutoff") {
      filt.lamb_shift_mode = LambShiftMode::Cutoff;
      filt.cutoff = r.quantity(path + ".filter.cutoff", QuantityKind::Frequency);
    } else {
      throw ConfigError(path + ".filter.lamb_shift", "expected 'off' or 'cutoff'");
    }
    b.filter = filt;
  }
  try {
    b.validate();
  } catch (const InvalidConfiguration& e) {
    throw ConfigError(path, e.what());
  }
  return b;
}

void resolve_comparison(Reader& r, ScenarioConfig& c) {
  ComparisonParams& p = c.comparison;
  p.omega = r.pair("comparison.omega", QuantityKind::Frequency, 1.0);
  p.alpha = r.quantity("comparison.alpha", QuantityKind::Dimensionless, 0.2);
  p.rate = r.quantity("comparison.rate", QuantityKind::Frequency, 0.1);
  p.n_a = r.quantity("comparison.n_a", QuantityKind::Dimensionless, 0.0);
  p.reference.kappa_c = r.quantity("comparison.kappa_c", QuantityKind::Frequency, p.rate);
  p.reference.kappa_d = r.quantity("comparison.kappa_d", QuantityKind::Frequency, p.rate);
  p.reference.beta = r.quantity("comparison.beta", QuantityKind::Dimensionless, 0.0);
  p.free_hamiltonian = r.flag("comparison.free_hamiltonian", true);
  if (!(p.omega[0] > 0.0) || !(p.omega[1] > 0.0)) throw ConfigError("comparison.omega", "must be positive");
  if (!(p.rate >= 0.0) || !(p.reference.kappa_c >= 0.0) || !(p.reference.kappa_d >= 0.0))
    throw ConfigError("comparison", "rates must be >= 0");
  if (!(p.n_a >= 0.0)) throw ConfigError("comparison.n_a", "must be >= 0");
}

} // namespace

ScenarioConfig resolve(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be an object");
  for (const auto& [k, v] : doc.items()) {
    (void)v;
    if (!known_top_level().count(k)) throw ConfigError(k, "unknown key");
  }
  ScenarioConfig c;
  Reader r(doc, c);
  c.kind = parse_kind(r.text("scenario", "custom_sweep"));

  const json* tn = r.find("truncation");
  if (tn) {
    if (!tn->is_number_integer()) throw ConfigError("truncation", "expected an integer");
    c.truncation = tn->get<int>();
  }
  if (c.truncation < 3) throw ConfigError("truncation", "must be at least 3");
  c.output_dir = r.text("output_dir", "out");

  if (r.find("omega_a")) {
    const json& wa = *r.find("omega_a");
    if (!wa.is_string()) throw ConfigError("omega_a", "expected a frequency such as \"10 GHz\"");
    try {
      c.nu_a_hz = parse_frequency_hz(wa.get<std::string>());
      r.set_units(UnitSystem(c.nu_a_hz));
    } catch (const InvalidConfiguration& e) {
      throw ConfigError("omega_a", e.what());
    }
  }

  if (c.kind == ScenarioKind::Fig2Comparison) {
    resolve_comparison(r, c);
    const double period = 2.0 * std::numbers::pi / (c.comparison.omega[0] + c.comparison.omega[1]);
    c.integration.t_final = r.is_auto("integration.t_final")
                                ? 6.0 * period
                                : r.quantity("integration.t_final", QuantityKind::Dimensionless);
    c.integration.stride = r.is_auto("integration.stride")
                               ? period / 60.0
                               : r.quantity("integration.stride", QuantityKind::Dimensionless);
    c.time_unit = r.text("time_unit", "omega1");
  } else {
    const std::string kind = r.text("system.ancilla", "tls");
    AncillaKind ak = AncillaKind::TLS;
    if (kind == "oscillator")
      ak = AncillaKind::Oscillator;
    else if (kind != "tls")
      throw ConfigError("system.ancilla", "expected 'tls' or 'oscillator'");
    const auto omega = r.pair("system.omega", QuantityKind::Frequency);
    const auto alpha = r.pair("system.alpha", QuantityKind::Dimensionless);
    try {
      c.system = SystemParams::from_alpha(1.0, omega, alpha, ak);
    } catch (const InvalidConfiguration& e) {
      throw ConfigError("system", e.what());
    }

    c.baths.hot = read_bath(r, "baths.hot", BathLabel::Hot, true);
    c.baths.cold = read_bath(r, "baths.cold", BathLabel::Cold, true);
    const json* loc = r.find("baths.local");
    if (!loc) throw ConfigError("baths.local", "missing required value");
    if (loc->is_array()) {
      if (loc->size() != 2) throw ConfigError("baths.local", "expected one object or two");
      c.baths.local[0] = read_bath(r, "baths.local.0", BathLabel::Local1, false);
      c.baths.local[1] = read_bath(r, "baths.local.1", BathLabel::Local2, false);
    } else {
      c.baths.local[0] = read_bath(r, "baths.local", BathLabel::Local1, false);
      c.baths.local[1] = c.baths.local[0];
      c.baths.local[1].label = BathLabel::Local2;
    }

    const std::string gen = r.text("generator", "auto");
    if (gen == "auto") {
      if (c.kind == ScenarioKind::Fig4Degenerate)
        c.generator = GeneratorKind::FilteredDegenerate;
      else if (c.kind == ScenarioKind::CustomSweep && c.system.degenerate())
        c.generator = GeneratorKind::FilteredDegenerate;
      else
        c.generator = GeneratorKind::FilteredNondegenerate;
    } else if (gen == "full_secular") {
      c.generator = GeneratorKind::FullSecular;
    } else if (gen == "filtered_nondegenerate") {
      c.generator = GeneratorKind::FilteredNondegenerate;
    } else if (gen == "filtered_degenerate") {
      c.generator = GeneratorKind::FilteredDegenerate;
    } else {
      throw ConfigError("generator", "unknown generator '" + gen + "'");
    }

    const double wm = c.system.omega_a - c.system.omega[0] - c.system.omega[1];
    if (c.baths.hot.filter && std::isnan(c.baths.hot.filter->center)) c.baths.hot.filter->center = wm;
    if (c.baths.cold.filter && std::isnan(c.baths.cold.filter->center)) c.baths.cold.filter->center = c.system.omega_a;
    if (c.generator != GeneratorKind::FullSecular && (!c.baths.hot.filter || !c.baths.cold.filter))
      throw ConfigError("baths", "filtered generators need a filter on the hot and the cold bath");
    if (!(wm > 0.0)) throw ConfigError("system.omega", "omega_a must exceed omega_1 + omega_2");

    const double ti = std::max(c.baths.local[0].temperature, c.baths.local[1].temperature);
    if (c.kind != ScenarioKind::CustomSweep &&
        !(c.baths.hot.temperature > ti && ti > c.baths.cold.temperature))
      c.warnings.push_back("temperatures do not satisfy T_h > T_i > T_c");

    const std::string init = r.text("initial.state", "ground");
    if (init == "thermal") {
      c.initial.thermal = true;
      c.initial.nbar = r.pair("initial.nbar", QuantityKind::Dimensionless);
      if (!(c.initial.nbar[0] >= 0.0) || !(c.initial.nbar[1] >= 0.0))
        throw ConfigError("initial.nbar", "must be >= 0");
    } else if (init != "ground") {
      throw ConfigError("initial.state", "expected 'ground' or 'thermal'");
    }
    const std::string anc = r.text("initial.ancilla", "ground");
    if (anc != "ground" && anc != "excited") throw ConfigError("initial.ancilla", "expected 'ground' or 'excited'");
    c.initial.ancilla_excited = anc == "excited";
    c.free_hamiltonian = r.flag("free_hamiltonian", false);

    const bool auto_final = r.is_auto("integration.t_final");
    if (auto_final) {
      // Ten times the slowest relevant relaxation: the joint cooling channel
      // or the local baths, whichever is faster.
      const double a3 = std::pow(c.system.common_alpha(), 3);
      const double joint = a3 * bath_response(-wm, c.baths.hot);
      double local = 0.0;
      for (int i = 0; i < 2; ++i)
        local = std::max(local, bath_response(c.system.omega[i], c.baths.local[i]) -
                                    bath_response(-c.system.omega[i], c.baths.local[i]));
      const double rate = std::max(joint, local);
      c.integration.t_final = rate > 0.0 ? std::clamp(10.0 / rate, 1e5, 1e10) : 1e8;
    } else {
      c.integration.t_final = r.quantity("integration.t_final", QuantityKind::Dimensionless);
    }
    c.integration.stride = r.is_auto("integration.stride")
                               ? c.integration.t_final / 200.0
                               : r.quantity("integration.stride", QuantityKind::Dimensionless);
    c.integration.settle = r.flag("integration.settle", auto_final);
    c.time_unit = r.text("time_unit", "omega_a");
  }

  c.integration.rtol = r.quantity("integration.rtol", QuantityKind::Dimensionless, 1e-8);
  c.integration.atol = r.quantity("integration.atol", QuantityKind::Dimensionless, 1e-10);
  if (!(c.integration.t_final > 0.0)) throw ConfigError("integration.t_final", "must be positive");
  if (!(c.integration.stride > 0.0) || c.integration.stride > c.integration.t_final)
    throw ConfigError("integration.stride", "must be positive and no larger than t_final");
  if (!(c.integration.rtol > 0.0) || !(c.integration.atol > 0.0))
    throw ConfigError("integration", "tolerances must be positive");

  if (c.time_unit == "omega_a") {
    c.time_scale = 1.0;
  } else if (c.time_unit == "omega1") {
    c.time_scale = c.kind == ScenarioKind::Fig2Comparison ? c.comparison.omega[0] : c.system.omega[0];
  } else {
    throw ConfigError("time_unit", "expected 'omega_a' or 'omega1'");
  }
  return c;
}

std::vector<std::pair<std::string, json>> curve_documents(const json& doc) {
  std::vector<std::pair<std::string, json>> out;
  const ScenarioKind kind = parse_kind(doc.value("scenario", std::string("custom_sweep")));
  json base = doc;
  base.erase("curves");
  if (kind == ScenarioKind::Fig2Comparison) {
    if (doc.contains("curves")) throw ConfigError("curves", "the comparison scenario defines its own two curves");
    out.emplace_back("dent", base);
    out.emplace_back("reference", base);
    return out;
  }
  if (!doc.contains("curves")) {
    out.emplace_back("main", base);
    return out;
  }
  const json& curves = doc["curves"];
  if (!curves.is_array() || curves.empty()) throw ConfigError("curves", "expected a nonempty list");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string path = "curves." + std::to_string(i);
    const json& cv = curves[i];
    if (!cv.is_object() || !cv.contains("name") || !cv["name"].is_string())
      throw ConfigError(path, "each curve needs a name");
    json d = base;
    if (cv.contains("set")) {
      if (!cv["set"].is_object()) throw ConfigError(path + ".set", "expected an object of key paths");
      for (const auto& [k, v] : cv["set"].items()) apply_override(d, k, v);
    }
    const std::string name = cv["name"].get<std::string>();
    for (const auto& [n, _] : out)
      if (n == name) throw ConfigError(path + ".name", "duplicate curve name '" + name + "'");
    out.emplace_back(name, d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Building and running

HilbertGeometry geometry_for(const ScenarioConfig& c) {
  const int n = c.truncation;
  if (c.kind == ScenarioKind::Fig2Comparison) return HilbertGeometry::two_mode(n, n);
  if (c.system.ancilla_kind == AncillaKind::Oscillator) return HilbertGeometry::with_oscillator(3, n, n);
  return HilbertGeometry::with_tls(n, n);
}

namespace {

Liouvillian build_for_curve(const ScenarioConfig& c, const std::string& curve) {
  const HilbertGeometry g = geometry_for(c);
  if (c.kind == ScenarioKind::Fig2Comparison) {
    Liouvillian l = curve == "reference" ? build_arenz_reference(c.comparison.reference, g)
                                         : build_dent_only(g, c.comparison.alpha, c.comparison.rate, c.comparison.n_a);
    if (c.comparison.free_hamiltonian) return l.with_hamiltonian(free_resonator_hamiltonian(g, c.comparison.omega));
    return l;
  }
  Liouvillian l = [&] {
    switch (c.generator) {
    case GeneratorKind::FullSecular:
      return build_full_secular(g, c.system, c.baths);
    case GeneratorKind::FilteredDegenerate:
      return build_filtered_degenerate(g, c.system, c.baths);
    case GeneratorKind::FilteredNondegenerate:
      break;
    }
    return build_filtered_nondegenerate(g, c.system, c.baths);
  }();
  if (c.free_hamiltonian) {
    // Resonator free energy in the polaron frame: sum_i omega_i b~_i^dag b~_i.
    const TransformedOperators ops = TransformedOperators::make(g, c.system.alpha);
    QOperator h = QOperator::zero(g);
    for (int i = 0; i < 2; ++i) h += complex(c.system.omega[i], 0.0) * (ops.b[i].adjoint() * ops.b[i]);
    Liouvillian out = l.with_hamiltonian(h);
    return out;
  }
  return l;
}

Matrix thermal_factor(int n, double nbar) {
  Matrix m = Matrix::Zero(n, n);
  if (nbar == 0.0) {
    m(0, 0) = 1.0;
    return m;
  }
  const double q = nbar / (1.0 + nbar);
  double norm = 0.0;
  for (int k = 0; k < n; ++k) norm += std::pow(q, k);
  for (int k = 0; k < n; ++k) m(k, k) = std::pow(q, k) / norm;
  return m;
}

} // namespace

Liouvillian build_liouvillian(const ScenarioConfig& c) { return build_for_curve(c, "dent"); }

DensityState initial_state(const ScenarioConfig& c, const HilbertGeometry& g) {
  const Matrix r1 = thermal_factor(g.fock_dim(0), c.initial.thermal ? c.initial.nbar[0] : 0.0);
  const Matrix r2 = thermal_factor(g.fock_dim(1), c.initial.thermal ? c.initial.nbar[1] : 0.0);
  Matrix ra = Matrix::Zero(g.ancilla_dim(), g.ancilla_dim());
  if (g.ancilla_kind() == AncillaKind::TLS)
    ra(c.initial.ancilla_excited ? 0 : 1, c.initial.ancilla_excited ? 0 : 1) = 1.0;
  else
    ra(c.initial.ancilla_excited ? 1 : 0, c.initial.ancilla_excited ? 1 : 0) = 1.0;
  const Matrix res = Eigen::kroneckerProduct(r1, r2).eval();
  const DensityState local(QOperator(g, Eigen::kroneckerProduct(ra, res).eval()));
  if (!g.has_ancilla()) return local;
  return to_polaron_frame(local, PolaronMap(g, c.system.alpha));
}

Observer observer_for(const ScenarioConfig& c, const HilbertGeometry& g) {
  if (!g.has_ancilla()) return Observer(g);
  return Observer(g, PolaronMap(g, c.system.alpha));
}

namespace {

EvolveOptions evolve_options(const ScenarioConfig& c) {
  EvolveOptions o;
  o.t_final = c.integration.t_final;
  o.stride = c.integration.stride;
  o.rtol = c.integration.rtol;
  o.atol = c.integration.atol;
  if (c.integration.settle) {
    o.stop = [](const std::vector<Record>& recs) {
      constexpr std::size_t window = 20;
      if (recs.size() < 2 * window) return false;
      const Record& now = recs.back();
      const Record& then = recs[recs.size() - 1 - window];
      auto still = [](double a, double b, double floor) {
        return std::abs(a - b) <= 1e-3 * std::max({std::abs(a), std::abs(b), floor});
      };
      return still(now.EN, then.EN, 1e-6) && still(now.n1, then.n1, 1e-6) && still(now.n2, then.n2, 1e-6);
    };
  }
  return o;
}

Trajectory run_named(const ScenarioConfig& c, const std::string& curve) {
  const HilbertGeometry g = geometry_for(c);
  const Liouvillian l = build_for_curve(c, curve);
  return evolve(l, initial_state(c, g), evolve_options(c), observer_for(c, g));
}

json term_audit(const Liouvillian& l) {
  json terms = json::array();
  for (const LindbladTerm& t : l.terms()) {
    terms.push_back({{"label", t.info.label},
                     {"bath", t.info.bath ? to_string(*t.info.bath) : std::string("-")},
                     {"alpha_order", t.info.alpha_order},
                     {"frequency", t.info.frequency},
                     {"rate", t.rate}});
  }
  return terms;
}

json bath_json(const BathSpec& b) {
  json j = {{"temperature", b.temperature}, {"coupling", b.coupling}};
  if (b.filter)
    j["filter"] = {{"center", b.filter->center},
                   {"kappa", b.filter->filter_coupling},
                   {"lamb_shift", b.filter->lamb_shift_mode == LambShiftMode::Off ? "off" : "cutoff"},
                   {"cutoff", b.filter->cutoff}};
  return j;
}

json resolved_json(const ScenarioConfig& c) {
  json j = {{"scenario", to_string(c.kind)},
            {"truncation", c.truncation},
            {"time_unit", c.time_unit},
            {"time_scale", c.time_scale},
            {"integration",
             {{"t_final", c.integration.t_final},
              {"stride", c.integration.stride},
              {"rtol", c.integration.rtol},
              {"atol", c.integration.atol},
              {"settle", c.integration.settle}}}};
  if (c.kind == ScenarioKind::Fig2Comparison) {
    const ComparisonParams& p = c.comparison;
    j["comparison"] = {{"omega", p.omega},     {"alpha", p.alpha},
                       {"rate", p.rate},       {"n_a", p.n_a},
                       {"kappa_c", p.reference.kappa_c}, {"kappa_d", p.reference.kappa_d},
                       {"beta", p.reference.beta.real()}, {"free_hamiltonian", p.free_hamiltonian}};
    return j;
  }
  j["omega_a_hz"] = c.nu_a_hz;
  j["generator"] = to_string(c.generator);
  j["system"] = {{"omega_a", c.system.omega_a},
                 {"omega", c.system.omega},
                 {"alpha", c.system.alpha},
                 {"g", c.system.g},
                 {"ancilla", to_string(c.system.ancilla_kind)}};
  j["baths"] = {{"hot", bath_json(c.baths.hot)},
                {"cold", bath_json(c.baths.cold)},
                {"local", {bath_json(c.baths.local[0]), bath_json(c.baths.local[1])}}};
  j["initial"] = {{"thermal", c.initial.thermal}, {"nbar", c.initial.nbar}, {"ancilla_excited", c.initial.ancilla_excited}};
  j["free_hamiltonian"] = c.free_hamiltonian;
  return j;
}

json rates_json(const ScenarioConfig& c) {
  if (c.kind == ScenarioKind::Fig2Comparison) return nullptr;
  if (!c.baths.hot.filter || !c.baths.cold.filter) return nullptr;
  const double na = default_ancilla_occupation(c.system, c.baths);
  const RateSet r = effective_rates(c.system, c.baths, na);
  const DominanceReport d = cooling_dominance(r);
  return {{"n_a", na},
          {"gamma_down", r.gamma_down},
          {"gamma_up", r.gamma_up},
          {"Gamma_down", r.Gamma_down},
          {"Gamma_up", r.Gamma_up},
          {"gamma_d", r.gamma_d},
          {"cooling_dominance", d.dominant},
          {"margin", d.margin}};
}

double peak(const Trajectory& t, double Record::*f) {
  double m = 0.0;
  for (const Record& r : t.records) m = std::max(m, r.*f);
  return m;
}

json summary_json(const Trajectory& t) {
  const Record& last = t.records.back();
  double worst_trace = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const Record& r : t.records) {
    worst_trace = std::max(worst_trace, r.trace_err);
    min_eig = std::min(min_eig, r.min_eig);
  }
  return {{"records", t.records.size()},
          {"t_end", last.t},
          {"peak_EN", peak(t, &Record::EN)},
          {"late_EN", last.EN},
          {"final_n1", last.n1},
          {"final_n2", last.n2},
          {"max_trace_err", worst_trace},
          {"min_eigenvalue", min_eig},
          {"accepted_steps", t.accepted_steps},
          {"rejected_steps", t.rejected_steps}};
}

constexpr int kDefaultsVersion = 1;

} // namespace

Trajectory run_curve(const ScenarioConfig& c) { return run_named(c, "dent"); }

RunResult run_scenario(const json& doc, const RunOptions& opts) {
  RunResult result;
  const auto docs = curve_documents(doc);
  std::string out_dir;
  json manifest = {{"manifest_version", 1}, {"defaults_version", kDefaultsVersion}, {"config", doc}};
  manifest["curves"] = json::array();

  for (const auto& [name, d] : docs) {
    ScenarioConfig c = resolve(d);
    if (out_dir.empty()) out_dir = opts.output_dir.value_or(c.output_dir);
    const Liouvillian l = build_for_curve(c, name);
    Trajectory traj = run_named(c, name);

    json entry = {{"name", name},
                  {"csv", name + ".csv"},
                  {"resolved", resolved_json(c)},
                  {"unit_conversions", c.conversions},
                  {"terms", term_audit(l)},
                  {"rates", rates_json(c)},
                  {"summary", summary_json(traj)}};
    json warns = c.warnings;
    for (const auto& w : l.warnings()) warns.push_back(w);
    entry["warnings"] = warns;

    if (opts.convergence) {
      const std::string curve = name;
      const ConvergenceReport rep = convergence_check(
          [&](int n) {
            ScenarioConfig cc = c;
            cc.truncation = n;
            cc.integration.settle = false;
            return run_named(cc, curve);
          },
          c.truncation);
      entry["convergence"] = {{"n_low", rep.n_low},   {"n_high", rep.n_high},     {"dev_EN", rep.dev_EN},
                              {"dev_n1", rep.dev_n1}, {"dev_n2", rep.dev_n2},     {"threshold", rep.threshold},
                              {"converged", rep.converged}};
    }
    manifest["curves"].push_back(entry);
    result.curves.push_back({name, std::move(c), std::move(traj), entry});
  }

  if (opts.write_files) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const CurveResult& cr : result.curves) {
      std::ofstream f(fs::path(out_dir) / (cr.name + ".csv"));
      if (!f) throw Error("cannot write " + (fs::path(out_dir) / (cr.name + ".csv")).string());
      write_csv(f, cr.trajectory, cr.config.time_scale);
    }
    std::ofstream m(fs::path(out_dir) / "manifest.json");
    if (!m) throw Error("cannot write manifest in " + out_dir);
    m << manifest.dump(2) << '\n';
  }
  result.manifest = std::move(manifest);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> axis_keys(const std::string& axis) {
  if (axis == "T_h") return {"baths.hot.temperature"};
  if (axis == "T_i") return {"baths.local.temperature"};
  if (axis == "alpha") return {"system.alpha"};
  if (axis == "N") return {"truncation"};
  throw InvalidConfiguration("unknown sweep axis '" + axis + "' (use T_h, T_i, alpha or N)");
}

} // namespace

std::vector<SweepRow> run_sweep(const json& doc, const std::string& axis, const std::vector<json>& values) {
  const auto keys = axis_keys(axis);
  json base = doc;
  base.erase("curves");
  if (parse_kind(base.value("scenario", std::string("custom_sweep"))) == ScenarioKind::Fig2Comparison && axis != "N")
    throw InvalidConfiguration("the comparison scenario only sweeps N");
  std::vector<SweepRow> rows;
  for (const json& v : values) {
    json d = base;
    for (const auto& k : keys) {
      if (k == "baths.local.temperature" && d.contains("baths") && d["baths"].contains("local") &&
          d["baths"]["local"].is_array()) {
        apply_override(d, "baths.local.0.temperature", v);
        apply_override(d, "baths.local.1.temperature", v);
      } else {
        apply_override(d, k, v);
      }
    }
    const ScenarioConfig c = resolve(d);
    const Trajectory t = run_named(c, "dent");
    SweepRow row;
    row.value = v;
    row.peak_EN = peak(t, &Record::EN);
    row.late_EN = t.records.back().EN;
    row.margin = std::numeric_limits<double>::quiet_NaN();
    const json rates = rates_json(c);
    if (rates.is_object()) row.margin = rates["margin"].get<double>();
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::string& axis, const std::vector<SweepRow>& rows) {
  os << axis << ",peak_EN,late_EN,dominance_margin\n";
  char buf[128];
  for (const SweepRow& r : rows) {
    const std::string v = r.value.is_string() ? r.value.get<std::string>() : r.value.dump();
    std::snprintf(buf, sizeof buf, ",%.10e,%.10e,%.6e\n", r.peak_EN, r.late_EN, r.margin);
    os << v << buf;
  }
}

json check_scenario(const json& doc) {
  json out = {{"curves", json::array()}};
  for (const auto& [name, d] : curve_documents(doc)) {
    const ScenarioConfig c = resolve(d);
    const Liouvillian l = build_for_curve(c, name);
    json warns = c.warnings;
    for (const auto& w : l.warnings()) warns.push_back(w);
    out["curves"].push_back({{"name", name},
                             {"resolved", resolved_json(c)},
                             {"unit_conversions", c.conversions},
                             {"terms", term_audit(l)},
                             {"rates", rates_json(c)},
                             {"warnings", warns}});
  }
  return out;
}

} // namespace hotent
