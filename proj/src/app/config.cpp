#include "otto/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "otto/errors.hpp"

#ifndef OTTO_DEFAULT_PRESET_DIR
#define OTTO_DEFAULT_PRESET_DIR "presets"
#endif

namespace otto::app {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

// Parsed file: section -> key -> entry.
class Document {
 public:
  Document(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream is(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(is, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
        section = trim(s.substr(1, s.size() - 2));
        if (!kSchema.count(section)) fail(line, "unknown section [" + section + "]");
        sections_[section];
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
      if (section.empty()) fail(line, "key outside of any section");
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty()) fail(line, "empty key");
      if (!kSchema.at(section).count(key)) fail(line, "[" + section + "] unknown key '" + key + "'");
      auto& keys = sections_[section];
      if (keys.count(key)) {
        fail(line, "[" + section + "] duplicate key '" + key + "' (first on line " +
                       std::to_string(keys[key].line) + ")");
      }
      keys[key] = {value, line, false};
    }
  }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

  const Entry* find(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  const Entry& require(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) fail(0, "missing required key [" + section + "] " + key);
    return *e;
  }

  double number(const std::string& section, const std::string& key, const Entry& e) {
    return parse_number(e.value, e.line, "[" + section + "] " + key);
  }

  double number(const std::string& section, const std::string& key) {
    return number(section, key, require(section, key));
  }

  double number_or(const std::string& section, const std::string& key, double fallback) {
    const Entry* e = find(section, key);
    return e ? number(section, key, *e) : fallback;
  }

  double parse_number(const std::string& token, int line, const std::string& what) {
    double v = 0.0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      fail(line, what + ": '" + token + "' is not a number");
    }
    return v;
  }

  void check_unused() const {
    for (const auto& [section, keys] : sections_) {
      for (const auto& [key, e] : keys) {
        if (!e.used) fail(e.line, "[" + section + "] unknown key '" + key + "'");
      }
    }
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (line > 0) os << ":" << line;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

 private:
  inline static const std::map<std::string, std::set<std::string>> kSchema = {
      {"meta", {"name", "description"}},
      {"medium", {"J", "omega_c", "omega_h"}},
      {"cold", {"T", "kappa_down", "gamma", "tau"}},
      {"hot", {"T", "kappa_down", "gamma", "tau"}},
      {"compression", {"tau", "schedule"}},
      {"expansion", {"tau", "schedule"}},
      {"mode", {"adiabat", "cold", "hot", "regime"}},
      {"sweep", {"axis1", "axis2", "temperature_ratio", "product", "analysis", "approximations",
                 "tau_adi"}},
      {"trajectory", {"samples"}},
      {"validate", {"tolerance"}},
      {"output", {"format"}}};
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

template <class T>
struct Named {
  T value;
  std::string_view name;
};

constexpr Named<std::optional<AdiabatClass>> kAdiabatModes[] = {
    {std::nullopt, "exact"},
    {AdiabatClass::SuddenGeneric, "sudden-generic"},
    {AdiabatClass::Class1, "class-1"},
    {AdiabatClass::Class2, "class-2"},
    {AdiabatClass::Class3a, "class-3a"},
    {AdiabatClass::Class3b, "class-3b"}};
constexpr Named<std::optional<IsochoreOrder>> kIsochoreModes[] = {
    {std::nullopt, "exact"},
    {IsochoreOrder::FrozenRotation, "frozen-rotation"},
    {IsochoreOrder::FirstOrder, "first-order"},
    {IsochoreOrder::SecondOrder, "second-order"}};
constexpr Named<Analysis> kAnalyses[] = {
    {Analysis::Grid, "grid"},
    {Analysis::PcVsTemperature, "pc-vs-temperature"},
    {Analysis::CopVsPower, "cop-vs-power"},
    {Analysis::CoherenceVsAdiabatTime, "coherence-vs-adiabat-time"}};
constexpr Named<Regime> kRegimes[] = {{Regime::Case1, "case-1"},
                                      {Regime::Case2, "case-2"},
                                      {Regime::Case3a, "case-3a"},
                                      {Regime::Case3b, "case-3b"}};
constexpr Named<Schedule> kSchedules[] = {{Schedule::ConstantMu, "constant-mu"},
                                          {Schedule::Linear, "linear"}};
constexpr Named<Format> kFormats[] = {{Format::Csv, "csv"}, {Format::Json, "json"}};

template <class T, std::size_t N>
T pick(Document& doc, const Entry& e, const Named<T> (&table)[N], const std::string& what) {
  for (const auto& n : table) {
    if (n.name == e.value) return n.value;
  }
  std::string options;
  for (const auto& n : table) options += (options.empty() ? "" : ", ") + std::string(n.name);
  doc.fail(e.line, what + ": '" + e.value + "' is not one of " + options);
}

template <class T, std::size_t N>
std::string_view name_of(const T& value, const Named<T> (&table)[N]) {
  for (const auto& n : table) {
    if (n.value == value) return n.name;
  }
  return "unknown";
}

Param param_token(Document& doc, const std::string& token, int line) {
  const auto p = parse_param(token);
  if (!p) doc.fail(line, "unknown parameter '" + token + "'");
  return *p;
}

Axis parse_axis(Document& doc, const Entry& e, const std::string& key) {
  const auto w = split_ws(e.value);
  const std::string what = "[sweep] " + key;
  if (w.size() < 3) doc.fail(e.line, what + ": expected '<param> lin|log lo hi count' or '<param> list v...'");
  Axis a;
  a.param = param_token(doc, w[0], e.line);
  if (w[1] == "list") {
    for (std::size_t i = 2; i < w.size(); ++i) a.list.push_back(doc.parse_number(w[i], e.line, what));
    return a;
  }
  if ((w[1] != "lin" && w[1] != "log") || w.size() != 5) {
    doc.fail(e.line, what + ": expected '<param> lin|log lo hi count'");
  }
  a.log = w[1] == "log";
  a.lo = doc.parse_number(w[2], e.line, what);
  a.hi = doc.parse_number(w[3], e.line, what);
  const double count = doc.parse_number(w[4], e.line, what);
  if (count < 1 || count != std::floor(count) || count > 1e6) {
    doc.fail(e.line, what + ": count must be a positive integer");
  }
  a.count = static_cast<int>(count);
  try {
    a.validate();
  } catch (const Error& err) {
    doc.fail(e.line, what + ": " + err.what());
  }
  return a;
}

BathSegment parse_bath(Document& doc, const std::string& s) {
  BathSegment b;
  b.T = doc.number(s, "T");
  b.kappa_down = doc.number(s, "kappa_down");
  b.gamma = doc.number_or(s, "gamma", 0.0);
  b.tau = doc.number(s, "tau");
  return b;
}

AdiabatSegment parse_adiabat(Document& doc, const std::string& s) {
  AdiabatSegment a;
  a.tau = doc.number(s, "tau");
  if (const Entry* e = doc.find(s, "schedule")) a.schedule = pick(doc, *e, kSchedules, "[" + s + "] schedule");
  return a;
}

bool parse_bool(Document& doc, const Entry& e, const std::string& what) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  doc.fail(e.line, what + ": expected true or false");
}

std::string axis_text(const Axis& a) {
  std::string s(to_string(a.param));
  if (!a.list.empty()) {
    s += " list";
    for (double v : a.list) s += " " + format_number(v);
    return s;
  }
  s += a.log ? " log " : " lin ";
  return s + format_number(a.lo) + " " + format_number(a.hi) + " " + std::to_string(a.count);
}

}  // namespace

std::string_view to_string(Analysis a) { return name_of(a, kAnalyses); }
std::string_view to_string(Regime r) { return name_of(r, kRegimes); }

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

SweepSpec RunConfig::sweep_spec() const {
  if (!sweep) throw ConfigError(name + ": this command needs a [sweep] section");
  SweepSpec s;
  s.base = params;
  s.axes = sweep->axes;
  s.constraints = sweep->constraints;
  s.approximations = sweep->approximations;
  return s;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  Document doc(text, source);
  RunConfig c;
  if (const Entry* e = doc.find("meta", "name")) c.name = e->value;
  if (const Entry* e = doc.find("meta", "description")) c.description = e->value;

  c.params.medium.J = doc.number("medium", "J");
  c.params.medium.omega_c = doc.number("medium", "omega_c");
  c.params.medium.omega_h = doc.number("medium", "omega_h");
  c.params.cold = parse_bath(doc, "cold");
  c.params.hot = parse_bath(doc, "hot");
  c.params.compression = parse_adiabat(doc, "compression");
  c.params.expansion = parse_adiabat(doc, "expansion");

  if (const Entry* e = doc.find("mode", "adiabat")) c.params.models.adiabat = pick(doc, *e, kAdiabatModes, "[mode] adiabat");
  if (const Entry* e = doc.find("mode", "cold")) c.params.models.cold = pick(doc, *e, kIsochoreModes, "[mode] cold");
  if (const Entry* e = doc.find("mode", "hot")) c.params.models.hot = pick(doc, *e, kIsochoreModes, "[mode] hot");
  if (const Entry* e = doc.find("mode", "regime")) c.regime = pick(doc, *e, kRegimes, "[mode] regime");

  if (doc.has_section("sweep")) {
    SweepConfig s;
    for (const char* key : {"axis1", "axis2"}) {
      if (const Entry* e = doc.find("sweep", key)) s.axes.push_back(parse_axis(doc, *e, key));
    }
    if (const Entry* e = doc.find("sweep", "temperature_ratio")) {
      Constraint k;
      k.kind = Constraint::Kind::TemperatureRatio;
      k.value = doc.number("sweep", "temperature_ratio", *e);
      if (!(k.value > 0.0 && k.value < 1.0)) doc.fail(e->line, "[sweep] temperature_ratio must lie in (0, 1)");
      s.constraints.push_back(k);
    }
    if (const Entry* e = doc.find("sweep", "product")) {
      const auto w = split_ws(e->value);
      if (w.size() != 3) doc.fail(e->line, "[sweep] product: expected '<source> <target> <value>'");
      Constraint k;
      k.kind = Constraint::Kind::Product;
      k.source = param_token(doc, w[0], e->line);
      k.target = param_token(doc, w[1], e->line);
      k.value = doc.parse_number(w[2], e->line, "[sweep] product");
      s.constraints.push_back(k);
    }
    if (const Entry* e = doc.find("sweep", "analysis")) s.analysis = pick(doc, *e, kAnalyses, "[sweep] analysis");
    if (const Entry* e = doc.find("sweep", "approximations")) s.approximations = parse_bool(doc, *e, "[sweep] approximations");
    if (const Entry* e = doc.find("sweep", "tau_adi")) {
      for (const auto& w : split_ws(e->value)) s.tau_adi.push_back(doc.parse_number(w, e->line, "[sweep] tau_adi"));
    }
    if (s.analysis == Analysis::CoherenceVsAdiabatTime) {
      if (s.tau_adi.empty()) doc.fail(0, "[sweep] coherence-vs-adiabat-time needs tau_adi");
    } else if (s.axes.empty()) {
      doc.fail(0, "[sweep] needs axis1");
    }
    c.sweep = std::move(s);
  }

  const double samples = doc.number_or("trajectory", "samples", 200);
  if (samples < 1 || samples != std::floor(samples)) doc.fail(0, "[trajectory] samples must be a positive integer");
  c.trajectory_samples = static_cast<int>(samples);
  c.validate_tolerance = doc.number_or("validate", "tolerance", 1e-6);
  if (const Entry* e = doc.find("output", "format")) c.format = pick(doc, *e, kFormats, "[output] format");
  doc.check_unused();

  try {
    c.params.validate();
    if (c.sweep && !c.sweep->axes.empty()) c.sweep_spec().validate();
  } catch (const Error& e) {
    doc.fail(0, e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.filename().string());
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string k, std::string v) { out.emplace_back(std::move(k), std::move(v)); };
  const auto& p = c.params;
  add("meta.name", c.name);
  if (!c.description.empty()) add("meta.description", c.description);
  add("medium.J", format_number(p.medium.J));
  add("medium.omega_c", format_number(p.medium.omega_c));
  add("medium.omega_h", format_number(p.medium.omega_h));
  for (const auto& [s, b] : {std::pair<const char*, const BathSegment*>{"cold", &p.cold}, {"hot", &p.hot}}) {
    add(std::string(s) + ".T", format_number(b->T));
    add(std::string(s) + ".kappa_down", format_number(b->kappa_down));
    add(std::string(s) + ".gamma", format_number(b->gamma));
    add(std::string(s) + ".tau", format_number(b->tau));
  }
  for (const auto& [s, a] : {std::pair<const char*, const AdiabatSegment*>{"compression", &p.compression},
                             {"expansion", &p.expansion}}) {
    add(std::string(s) + ".tau", format_number(a->tau));
    add(std::string(s) + ".schedule", std::string(name_of(a->schedule, kSchedules)));
  }
  add("mode.adiabat", std::string(name_of(p.models.adiabat, kAdiabatModes)));
  add("mode.cold", std::string(name_of(p.models.cold, kIsochoreModes)));
  add("mode.hot", std::string(name_of(p.models.hot, kIsochoreModes)));
  if (c.regime) add("mode.regime", std::string(to_string(*c.regime)));
  if (c.sweep) {
    const auto& s = *c.sweep;
    for (std::size_t k = 0; k < s.axes.size(); ++k) add("sweep.axis" + std::to_string(k + 1), axis_text(s.axes[k]));
    for (const auto& k : s.constraints) {
      if (k.kind == Constraint::Kind::TemperatureRatio) {
        add("sweep.temperature_ratio", format_number(k.value));
      } else {
        add("sweep.product", std::string(to_string(k.source)) + " " + std::string(to_string(k.target)) +
                                 " " + format_number(k.value));
      }
    }
    add("sweep.analysis", std::string(to_string(s.analysis)));
    add("sweep.approximations", s.approximations ? "true" : "false");
    if (!s.tau_adi.empty()) {
      std::string v;
      for (double t : s.tau_adi) v += (v.empty() ? "" : " ") + format_number(t);
      add("sweep.tau_adi", v);
    }
  }
  add("trajectory.samples", std::to_string(c.trajectory_samples));
  add("validate.tolerance", format_number(c.validate_tolerance));
  add("output.format", std::string(name_of(c.format, kFormats)));
  return out;
}

std::string to_config_text(const RunConfig& c) {
  std::string out, section;
  for (const auto& [key, value] : resolved_entries(c)) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out += (out.empty() ? "[" : "\n[") + s + "]\n";
      section = s;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::filesystem::path preset_dir() {
  if (const char* env = std::getenv("OTTO_PRESET_DIR"); env && *env) return env;
  return OTTO_DEFAULT_PRESET_DIR;
}

std::filesystem::path preset_path(const std::string& name) {
  const auto p = preset_dir() / (name + ".cfg");
  if (!std::filesystem::exists(p)) {
    throw ConfigError("unknown preset '" + name + "' (looked in " + preset_dir().string() + ")");
  }
  return p;
}

std::vector<std::string> list_presets() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(preset_dir(), ec)) {
    if (e.path().extension() == ".cfg") names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace otto::app
