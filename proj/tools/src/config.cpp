#include "abwave/tools/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "abwave/errors.hpp"
#include "abwave/tools/errors.hpp"
#include "abwave/wavefield.hpp"

namespace abwave::tools {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::path_integral_1d: return "path_integral_1d";
    case Mode::path_integral_2d: return "path_integral_2d";
  }
  return "?";
}

const char* to_string(AnalysisKind a) {
  return a == AnalysisKind::far_field ? "far_field" : "quantum_potential";
}

const char* to_string(RouteChoice r) {
  switch (r) {
    case RouteChoice::automatic: return "automatic";
    case RouteChoice::direct: return "direct";
    case RouteChoice::fraunhofer: return "fraunhofer";
  }
  return "?";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

double ScenarioConfig::flux_alpha() const {
  if (alpha) return *alpha;
  if (phi) return analytic::FluxStrength::from_flux(*phi).alpha();
  return 0.0;
}

std::size_t ScenarioConfig::line_of(const std::string& field) const {
  const auto it = lines.find(field);
  return it == lines.end() ? 0 : it->second;
}

namespace {

using analysis::AngleUnit;
using analysis::ProfileMode;
using propagator::KernelPhase;

// Raised by field parsers; the caller adds file/line/field.
struct BadValue {
  std::string message;
};

double parse_real(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last) {
    throw BadValue{"expected a number, got '" + text + "'"};
  }
  if (!std::isfinite(v)) throw BadValue{"value must be finite"};
  return v;
}

std::size_t parse_count(const std::string& text) {
  unsigned long long v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw BadValue{"expected a non-negative integer, got '" + text + "'"};
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw BadValue{"expected true or false, got '" + text + "'"};
}

template <class E, std::size_t N>
E parse_choice(const std::string& text,
               const std::array<std::pair<const char*, E>, N>& choices) {
  for (const auto& [name, value] : choices) {
    if (text == name) return value;
  }
  std::string allowed;
  for (const auto& c : choices) {
    if (!allowed.empty()) allowed += ", ";
    allowed += c.first;
  }
  throw BadValue{"unknown value '" + text + "' (allowed: " + allowed + ")"};
}

template <class E, std::size_t N>
const char* choice_name(E value, const std::array<std::pair<const char*, E>, N>& choices) {
  for (const auto& [name, v] : choices) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<const char*, Mode>, 3> kModes{{
    {"analytic", Mode::analytic},
    {"path_integral_1d", Mode::path_integral_1d},
    {"path_integral_2d", Mode::path_integral_2d}}};
constexpr std::array<std::pair<const char*, AnalysisKind>, 2> kAnalyses{{
    {"far_field", AnalysisKind::far_field},
    {"quantum_potential", AnalysisKind::quantum_potential}}};
constexpr std::array<std::pair<const char*, KernelPhase>, 2> kKernels{{
    {"two_pi", KernelPhase::two_pi}, {"pi", KernelPhase::pi}}};
constexpr std::array<std::pair<const char*, RouteChoice>, 3> kRoutes{{
    {"automatic", RouteChoice::automatic},
    {"direct", RouteChoice::direct},
    {"fraunhofer", RouteChoice::fraunhofer}}};
constexpr std::array<std::pair<const char*, AngleUnit>, 3> kAngleUnits{{
    {"scaled", AngleUnit::scaled},
    {"rad", AngleUnit::radian},
    {"mrad", AngleUnit::milliradian}}};
constexpr std::array<std::pair<const char*, ProfileMode>, 2> kProfiles{{
    {"projection", ProfileMode::projection},
    {"central_line", ProfileMode::central_line}}};

struct Field {
  std::string section;
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> read;
  std::function<std::optional<std::string>(const ScenarioConfig&)> write;
  // Numeric fields only.
  std::function<void(ScenarioConfig&, double)> assign;
  std::function<double(const ScenarioConfig&)> value;
  std::function<std::string(const ScenarioConfig&)> unit;

  std::string id() const { return section + "." + key; }
};

Field real(std::string sec, std::string key, double ScenarioConfig::*m, std::string unit) {
  return Field{
      std::move(sec), std::move(key),
      [m](ScenarioConfig& c, const std::string& t) { c.*m = parse_real(t); },
      [m](const ScenarioConfig& c) { return std::optional(format_double(c.*m)); },
      [m](ScenarioConfig& c, double v) { c.*m = v; },
      [m](const ScenarioConfig& c) { return c.*m; },
      [unit](const ScenarioConfig&) { return unit; }};
}

Field optional_real(std::string sec, std::string key,
                    std::optional<double> ScenarioConfig::*m, std::string unit) {
  return Field{
      std::move(sec), std::move(key),
      [m](ScenarioConfig& c, const std::string& t) { c.*m = parse_real(t); },
      [m](const ScenarioConfig& c) -> std::optional<std::string> {
        if (!(c.*m)) return std::nullopt;
        return format_double(*(c.*m));
      },
      [m](ScenarioConfig& c, double v) { c.*m = v; },
      [m](const ScenarioConfig& c) { return (c.*m) ? *(c.*m) : std::nan(""); },
      [unit](const ScenarioConfig&) { return unit; }};
}

Field count(std::string sec, std::string key, std::size_t ScenarioConfig::*m) {
  return Field{
      std::move(sec), std::move(key),
      [m](ScenarioConfig& c, const std::string& t) { c.*m = parse_count(t); },
      [m](const ScenarioConfig& c) { return std::optional(std::to_string(c.*m)); },
      [m](ScenarioConfig& c, double v) {
        if (!(v >= 0.0) || v != std::floor(v)) {
          throw ConfigError("sample counts must be non-negative integers, got " + format_double(v));
        }
        c.*m = static_cast<std::size_t>(v);
      },
      [m](const ScenarioConfig& c) { return static_cast<double>(c.*m); },
      [](const ScenarioConfig&) { return std::string("1"); }};
}

Field flag(std::string sec, std::string key, bool ScenarioConfig::*m) {
  return Field{std::move(sec), std::move(key),
               [m](ScenarioConfig& c, const std::string& t) { c.*m = parse_bool(t); },
               [m](const ScenarioConfig& c) {
                 return std::optional<std::string>(c.*m ? "true" : "false");
               },
               {}, {}, {}};
}

template <class E, std::size_t N>
Field choice(std::string sec, std::string key, E ScenarioConfig::*m,
             const std::array<std::pair<const char*, E>, N>& choices) {
  return Field{std::move(sec), std::move(key),
               [m, &choices](ScenarioConfig& c, const std::string& t) {
                 c.*m = parse_choice(t, choices);
               },
               [m, &choices](const ScenarioConfig& c) {
                 return std::optional<std::string>(choice_name(c.*m, choices));
               },
               {}, {}, {}};
}

std::string angle_unit_name(const ScenarioConfig& c) {
  return analysis::to_string(c.angle_unit);
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(Field{"scenario", "name",
                      [](ScenarioConfig& c, const std::string& t) { c.name = t; },
                      [](const ScenarioConfig& c) { return std::optional(c.name); },
                      {}, {}, {}});
    f.push_back(choice("scenario", "mode", &ScenarioConfig::mode, kModes));
    f.push_back(choice("scenario", "analysis", &ScenarioConfig::analysis, kAnalyses));
    f.push_back(Field{
        "scenario", "outputs",
        [](ScenarioConfig& c, const std::string& t) {
          c.write_csv = false;
          c.write_svg = false;
          std::stringstream in(t);
          std::string item;
          while (std::getline(in, item, ',')) {
            const auto b = item.find_first_not_of(' ');
            const auto e = item.find_last_not_of(' ');
            item = b == std::string::npos ? "" : item.substr(b, e - b + 1);
            if (item == "csv") {
              c.write_csv = true;
            } else if (item == "svg") {
              c.write_svg = true;
            } else {
              throw BadValue{"unknown output '" + item + "' (allowed: csv, svg)"};
            }
          }
        },
        [](const ScenarioConfig& c) {
          std::string s;
          if (c.write_csv) s = "csv";
          if (c.write_svg) s += s.empty() ? "svg" : ", svg";
          return std::optional(s);
        },
        {}, {}, {}});
    f.push_back(optional_real("flux", "alpha", &ScenarioConfig::alpha, "1"));
    f.push_back(optional_real("flux", "phi", &ScenarioConfig::phi, "Wb"));
    f.push_back(real("flux", "bar_width", &ScenarioConfig::bar_width, "m"));
    f.push_back(real("beam", "energy_ev", &ScenarioConfig::energy_ev, "eV"));
    f.push_back(real("beam", "beta", &ScenarioConfig::beta, "m"));
    f.push_back(count("grid", "source_samples", &ScenarioConfig::source_samples));
    f.push_back(optional_real("grid", "source_extent", &ScenarioConfig::source_extent, "m"));
    f.push_back(count("grid", "target_samples", &ScenarioConfig::target_samples));
    {
      auto t = real("grid", "theta_max", &ScenarioConfig::theta_max, "");
      t.unit = angle_unit_name;
      f.push_back(std::move(t));
    }
    f.push_back(optional_real("grid", "target_extent", &ScenarioConfig::target_extent, "m"));
    f.push_back(count("grid", "samples", &ScenarioConfig::samples_2d));
    f.push_back(real("grid", "extent", &ScenarioConfig::extent_2d, "m"));
    f.push_back(real("aperture", "radius", &ScenarioConfig::aperture_radius, "m"));
    f.push_back(real("geometry", "distance", &ScenarioConfig::distance, "m"));
    f.push_back(real("geometry", "fraction", &ScenarioConfig::fraction, "1"));
    f.push_back(choice("geometry", "kernel_phase_factor", &ScenarioConfig::kernel, kKernels));
    f.push_back(choice("geometry", "route", &ScenarioConfig::route, kRoutes));
    f.push_back(choice("detector", "angle_unit", &ScenarioConfig::angle_unit, kAngleUnits));
    f.push_back(optional_real("detector", "camera_length", &ScenarioConfig::camera_length, "m"));
    f.push_back(choice("detector", "profile", &ScenarioConfig::profile, kProfiles));
    {
      auto s = real("coherence", "source_rms", &ScenarioConfig::source_rms, "");
      s.unit = angle_unit_name;
      f.push_back(std::move(s));
    }
    f.push_back(flag("compare", "analytic", &ScenarioConfig::compare_analytic));
    f.push_back(flag("compare", "demagnetized", &ScenarioConfig::compare_demagnetized));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

const Field& numeric_field(const std::string& name) {
  const std::string id = resolve_parameter(name);
  const auto dot = id.find('.');
  return *find_field(id.substr(0, dot), id.substr(dot + 1));
}

}  // namespace

std::vector<std::string> numeric_parameters() {
  std::vector<std::string> out;
  for (const auto& f : fields()) {
    if (f.assign) out.push_back(f.id());
  }
  return out;
}

std::string resolve_parameter(const std::string& name) {
  std::vector<std::string> matches;
  for (const auto& f : fields()) {
    if (!f.assign) continue;
    if (f.id() == name || f.key == name) matches.push_back(f.id());
  }
  if (matches.size() == 1) return matches.front();
  std::string allowed;
  for (const auto& p : numeric_parameters()) allowed += (allowed.empty() ? "" : ", ") + p;
  if (matches.empty()) {
    throw ConfigError("not a numeric configuration field (allowed: " + allowed + ")", {}, 0, name);
  }
  throw ConfigError("ambiguous parameter name; use section.key", {}, 0, name);
}

void set_parameter(ScenarioConfig& config, const std::string& name, double value) {
  const Field& f = numeric_field(name);
  f.assign(config, value);
  // alpha and phi describe the same flux; the swept one wins.
  if (f.id() == "flux.alpha") config.phi.reset();
  if (f.id() == "flux.phi") config.alpha.reset();
}

double get_parameter(const ScenarioConfig& config, const std::string& name) {
  const Field& f = numeric_field(name);
  if (f.id() == "flux.alpha") return config.flux_alpha();
  return f.value(config);
}

std::string parameter_unit(const ScenarioConfig& config, const std::string& name) {
  return numeric_field(name).unit(config);
}

ScenarioConfig parse_config(const IniDocument& doc) {
  ScenarioConfig c;
  c.source = doc.source();
  for (const auto& section : doc.sections()) {
    bool known_section = false;
    for (const auto& f : fields()) known_section |= f.section == section.name;
    if (!known_section) {
      throw ConfigError("unknown section [" + section.name + "]", doc.source(), section.line);
    }
    for (const auto& entry : section.entries) {
      const Field* f = find_field(section.name, entry.key);
      const std::string id = section.name + "." + entry.key;
      if (f == nullptr) throw ConfigError("unknown key", doc.source(), entry.line, id);
      try {
        f->read(c, entry.value);
      } catch (const BadValue& bad) {
        throw ConfigError(bad.message, doc.source(), entry.line, id);
      }
      c.lines[id] = entry.line;
    }
  }
  if (c.name.empty()) throw ConfigError("required", doc.source(), 0, "scenario.name");
  if (!c.lines.count("scenario.mode")) {
    throw ConfigError("required", doc.source(), 0, "scenario.mode");
  }
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  return parse_config(IniDocument::load(path));
}

ScenarioConfig config_from_text(const std::string& text, const std::string& source) {
  return parse_config(IniDocument::parse(text, source));
}

namespace {

class Checker {
 public:
  explicit Checker(const ScenarioConfig& c) : c_(c) {}

  void require(bool ok, const std::string& field, const std::string& message) const {
    if (!ok) throw ConfigError(message, c_.source, c_.line_of(field), field);
  }
  void positive(double v, const std::string& field) const {
    require(std::isfinite(v) && v > 0.0, field, "must be positive, got " + format_double(v));
  }

 private:
  const ScenarioConfig& c_;
};

}  // namespace

void validate_config(const ScenarioConfig& c) {
  const Checker check(c);
  check.require(!c.name.empty(), "scenario.name", "must not be empty");
  for (char ch : c.name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    check.require(ok, "scenario.name", "may only contain letters, digits, '_', '-' and '.'");
  }
  check.require(c.write_csv || c.write_svg, "scenario.outputs", "at least one output is required");
  if (c.write_svg) {
    check.require(c.write_csv, "scenario.outputs", "svg output is drawn from the csv; list csv too");
  }

  check.require(c.alpha.has_value() || c.phi.has_value(), "flux.alpha",
                "required (or give flux.phi)");
  try {
    if (c.alpha && c.phi) {
      analytic::FluxStrength(*c.alpha, *c.phi);
    } else if (c.alpha) {
      analytic::FluxStrength{*c.alpha};
    }
  } catch (const abwave::Error& e) {
    check.require(false, c.phi ? "flux.phi" : "flux.alpha", e.what());
  }
  check.require(c.bar_width >= 0.0, "flux.bar_width", "must be >= 0");

  check.positive(c.energy_ev, "beam.energy_ev");
  check.positive(c.beta, "beam.beta");
  check.positive(c.distance, "geometry.distance");
  check.require(c.fraction > 0.0 && c.fraction <= 1.0, "geometry.fraction",
                "must lie in (0, 1]");
  check.require(c.source_rms >= 0.0, "coherence.source_rms", "must be >= 0");
  if (c.camera_length) check.positive(*c.camera_length, "detector.camera_length");

  const bool one_d = c.mode == Mode::path_integral_1d;
  const bool two_d = c.mode == Mode::path_integral_2d;
  if (c.analysis == AnalysisKind::quantum_potential) {
    check.require(one_d, "scenario.analysis",
                  "quantum_potential needs mode = path_integral_1d");
    check.require(c.source_rms == 0.0, "coherence.source_rms",
                  "partial coherence applies to far-field patterns only");
  }
  if (c.mode == Mode::analytic) {
    check.require(c.target_samples >= 3, "grid.target_samples", "must be >= 3");
    check.positive(c.theta_max, "grid.theta_max");
    check.require(!c.compare_demagnetized, "compare.demagnetized",
                  "only available for path-integral modes");
  }
  if (one_d) {
    check.require(c.source_samples >= 16, "grid.source_samples", "must be >= 16");
    check.require(c.target_samples >= 16, "grid.target_samples", "must be >= 16");
    check.positive(c.theta_max, "grid.theta_max");
    if (c.source_extent) check.positive(*c.source_extent, "grid.source_extent");
    if (c.target_extent) check.positive(*c.target_extent, "grid.target_extent");
    check.require(c.route != RouteChoice::fraunhofer, "geometry.route",
                  "1-D runs sample arbitrary detector angles; use direct or automatic");
    check.require(c.bar_width == 0.0, "flux.bar_width",
                  "1-D runs use the ideal flux line (bar_width = 0)");
  }
  if (two_d) {
    check.require(c.samples_2d >= 16, "grid.samples", "must be >= 16");
    check.positive(c.extent_2d, "grid.extent");
    check.positive(c.aperture_radius, "aperture.radius");
    check.require(c.bar_width <= 2.0 * c.aperture_radius, "flux.bar_width",
                  "bar is wider than the aperture");
    check.require(1.2 * c.aperture_radius < 0.5 * c.extent_2d, "grid.extent",
                  "aperture plus a 20% margin does not fit on the grid");
    check.require(!c.compare_analytic, "compare.analytic",
                  "the paraxial amplitude describes the 1-D flux line only");
  }
  if (c.compare_analytic) {
    check.require(one_d && c.analysis == AnalysisKind::far_field, "compare.analytic",
                  "needs a 1-D far-field run");
  }
  if (!two_d) {
    // w links the scaled and physical angle axes; check the beam builds.
    try {
      wavefield::BeamParams::from_energy(c.energy_ev, c.beta).validate();
    } catch (const abwave::Error& e) {
      check.require(false, "beam.energy_ev", e.what());
    }
  }
  if (two_d) {
    check.require(c.angle_unit != analysis::AngleUnit::scaled, "detector.angle_unit",
                  "the scaled axis w*theta is defined for the 1-D flux line only");
  }
}

std::string to_ini(const ScenarioConfig& c) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    const auto text = f.write(c);
    if (!text) continue;
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      out << '[' << f.section << "]\n";
      section = f.section;
    }
    out << f.key << " = " << *text << '\n';
  }
  return out.str();
}

}  // namespace abwave::tools
