#include "cvent/scenario/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace cvent::scenario {

namespace {

std::string location(const std::string& file, int line, int column) {
  std::ostringstream os;
  os << file;
  if (line > 0) os << ':' << line << ':' << column;
  return os.str();
}

class Reader {
 public:
  explicit Reader(std::string file) : file_(std::move(file)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& message) const {
    int line = 0;
    int column = 0;
    if (at.IsDefined()) {
      const YAML::Mark m = at.Mark();
      if (m.line >= 0) {
        line = m.line + 1;
        column = m.column + 1;
      }
    }
    throw ConfigError(file_, line, column, field, message);
  }

  void require_map(const YAML::Node& n, const std::string& field) const {
    if (!n.IsMap()) fail(n, field, "expected a mapping");
  }

  void allow_keys(const YAML::Node& n, const std::string& field, std::initializer_list<const char*> keys) const {
    for (const auto& kv : n) {
      const std::string key = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        fail(kv.first, join(field, key), "unknown field");
      }
    }
  }

  YAML::Node child(const YAML::Node& parent, const std::string& field, const char* key) const {
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) fail(parent, join(field, key), "missing required field");
    return n;
  }

  std::string scalar(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a scalar");
    return n.Scalar();
  }

  std::string expression(const YAML::Node& n, const std::string& field, const Bindings& b) const {
    const std::string text = scalar(n, field);
    try {
      evaluate_expression(text, b);
    } catch (const ExpressionError& e) {
      fail(n, field, e.what());
    }
    return text;
  }

  double value(const YAML::Node& n, const std::string& field, const Bindings& b) const {
    return evaluate_expression(expression(n, field, b), b);
  }

  std::size_t count(const YAML::Node& n, const std::string& field) const {
    const std::string s = scalar(n, field);
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) fail(n, field, "expected a non-negative integer");
    return v;
  }

  std::uint64_t u64(const YAML::Node& n, const std::string& field) const {
    const std::string s = scalar(n, field);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) fail(n, field, "expected an unsigned 64-bit integer");
    return v;
  }

  bool boolean(const YAML::Node& n, const std::string& field) const {
    bool v = false;
    if (!n.IsScalar() || !YAML::convert<bool>::decode(n, v)) fail(n, field, "expected true or false");
    return v;
  }

  std::vector<std::string> scalar_list(const YAML::Node& n, const std::string& field) const {
    std::vector<std::string> out;
    if (n.IsScalar()) return {n.Scalar()};
    if (!n.IsSequence()) fail(n, field, "expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar(n[i], index(field, i)));
    return out;
  }

  static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }
  static std::string index(const std::string& a, std::size_t i) { return a + "[" + std::to_string(i) + "]"; }

 private:
  std::string file_;
};

struct Parser {
  Reader r;
  ScenarioConfig cfg;
  Bindings bindings;
  std::set<std::string> labels;

  void mode_ref(const YAML::Node& n, const std::string& field, const std::string& label) const {
    if (!labels.count(label)) r.fail(n, field, "unknown mode '" + label + "' (not a declared source)");
  }

  void parameters(const YAML::Node& root) {
    const YAML::Node p = root["parameters"];
    if (!p.IsDefined() || p.IsNull()) return;
    r.require_map(p, "parameters");
    for (const auto& kv : p) {
      const std::string name = kv.first.as<std::string>();
      const std::string field = "parameters." + name;
      if (name == "pi" || bindings.count(name)) r.fail(kv.first, field, "duplicate or reserved parameter name");
      const std::string text = r.expression(kv.second, field, bindings);
      bindings[name] = evaluate_expression(text, bindings);
      cfg.parameters.emplace_back(name, text);
    }
  }

  void sources(const YAML::Node& root) {
    const YAML::Node s = r.child(root, "", "sources");
    if (!s.IsSequence() || s.size() == 0) r.fail(s, "sources", "expected a non-empty list of sources");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string field = Reader::index("sources", i);
      const YAML::Node n = s[i];
      r.require_map(n, field);
      r.allow_keys(n, field, {"label", "amplitude", "squeeze_db", "excess_factor", "polarization", "squeeze_angle"});
      SourceSpec src;
      src.label = r.scalar(r.child(n, field, "label"), field + ".label");
      if (src.label.empty() || !labels.insert(src.label).second) {
        r.fail(n["label"], field + ".label", "source labels must be unique and non-empty");
      }
      const YAML::Node amp = r.child(n, field, "amplitude");
      if (amp.IsSequence()) {
        if (amp.size() != 2) r.fail(amp, field + ".amplitude", "expected [re, im]");
        src.complex_amplitude = true;
        src.amplitude_re = r.expression(amp[0], field + ".amplitude[0]", bindings);
        src.amplitude_im = r.expression(amp[1], field + ".amplitude[1]", bindings);
      } else {
        src.amplitude_re = r.expression(amp, field + ".amplitude", bindings);
      }
      if (n["squeeze_db"]) {
        src.squeeze_db = r.expression(n["squeeze_db"], field + ".squeeze_db", bindings);
        if (!(evaluate_expression(src.squeeze_db, bindings) >= 0.0)) {
          r.fail(n["squeeze_db"], field + ".squeeze_db", "squeeze_db must be >= 0");
        }
      }
      if (n["excess_factor"]) {
        src.excess_factor = r.expression(n["excess_factor"], field + ".excess_factor", bindings);
        if (!(evaluate_expression(src.excess_factor, bindings) >= 1.0)) {
          r.fail(n["excess_factor"], field + ".excess_factor",
                 "excess_factor must be >= 1 (uncertainty relation)");
        }
      }
      if (n["polarization"]) src.polarization = r.scalar(n["polarization"], field + ".polarization");
      if (n["squeeze_angle"]) {
        src.squeeze_angle = r.expression(n["squeeze_angle"], field + ".squeeze_angle", bindings);
      }
      cfg.sources.push_back(std::move(src));
    }
  }

  void network(const YAML::Node& root) {
    const YAML::Node net = root["network"];
    if (!net.IsDefined() || net.IsNull()) return;
    if (!net.IsSequence()) r.fail(net, "network", "expected a list of elements");
    for (std::size_t i = 0; i < net.size(); ++i) {
      const std::string field = Reader::index("network", i);
      const YAML::Node item = net[i];
      if (!item.IsMap() || item.size() != 1) r.fail(item, field, "expected a single-key mapping naming the element");
      const std::string kind = item.begin()->first.as<std::string>();
      const YAML::Node n = item.begin()->second;
      const std::string f = field + "." + kind;
      r.require_map(n, f);
      StepSpec st;
      if (kind == "phase_shift") {
        r.allow_keys(n, f, {"mode", "angle"});
        st.kind = StepKind::phase_shift;
        st.modes = {r.scalar(r.child(n, f, "mode"), f + ".mode")};
        mode_ref(n["mode"], f + ".mode", st.modes[0]);
        st.angle = r.expression(r.child(n, f, "angle"), f + ".angle", bindings);
      } else if (kind == "beam_splitter") {
        r.allow_keys(n, f, {"modes", "transmittance", "phase"});
        st.kind = StepKind::beam_splitter;
        const YAML::Node m = r.child(n, f, "modes");
        st.modes = r.scalar_list(m, f + ".modes");
        if (st.modes.size() != 2 || st.modes[0] == st.modes[1]) {
          r.fail(m, f + ".modes", "expected two distinct modes");
        }
        for (std::size_t k = 0; k < 2; ++k) mode_ref(m, Reader::index(f + ".modes", k), st.modes[k]);
        if (n["transmittance"]) {
          st.transmittance = r.expression(n["transmittance"], f + ".transmittance", bindings);
          const double t = evaluate_expression(st.transmittance, bindings);
          if (!(t >= 0.0 && t <= 1.0)) r.fail(n["transmittance"], f + ".transmittance", "must lie in [0, 1]");
        }
        if (n["phase"]) st.phase = r.expression(n["phase"], f + ".phase", bindings);
      } else if (kind == "polarizing_combiner") {
        r.allow_keys(n, f, {"x", "y", "beam"});
        st.kind = StepKind::polarizing_combiner;
        st.modes = {r.scalar(r.child(n, f, "x"), f + ".x"), r.scalar(r.child(n, f, "y"), f + ".y")};
        mode_ref(n["x"], f + ".x", st.modes[0]);
        mode_ref(n["y"], f + ".y", st.modes[1]);
        if (st.modes[0] == st.modes[1]) r.fail(n, f, "x and y must be different modes");
        st.beam = r.scalar(r.child(n, f, "beam"), f + ".beam");
      } else if (kind == "modulation") {
        r.allow_keys(n, f, {"mode", "amplitude_variance", "phase_variance"});
        st.kind = StepKind::modulation;
        st.modes = {r.scalar(r.child(n, f, "mode"), f + ".mode")};
        mode_ref(n["mode"], f + ".mode", st.modes[0]);
        for (auto [key, target] : {std::pair{"amplitude_variance", &st.amplitude_variance},
                                   std::pair{"phase_variance", &st.phase_variance}}) {
          if (!n[key]) continue;
          *target = r.expression(n[key], f + "." + key, bindings);
          if (!(evaluate_expression(*target, bindings) >= 0.0)) r.fail(n[key], f + "." + key, "must be >= 0");
        }
      } else {
        r.fail(item, field, "unknown element '" + kind + "'");
      }
      cfg.network.push_back(std::move(st));
    }
  }

  void scanned_parameter(const YAML::Node& n, const std::string& f, AnalysisSpec& a) {
    if (n["parameter"]) a.parameter = r.scalar(n["parameter"], f + ".parameter");
    if (!bindings.count(a.parameter)) {
      r.fail(n["parameter"] ? n["parameter"] : n, f + ".parameter",
             "parameter '" + a.parameter + "' is not declared in parameters");
    }
  }

  void arms(const YAML::Node& n, const std::string& f, const char* key, AnalysisSpec& a, std::size_t expected) {
    const YAML::Node m = r.child(n, f, key);
    a.modes = r.scalar_list(m, f + "." + key);
    if (expected != 0 && a.modes.size() != expected) {
      r.fail(m, f + "." + key, "expected " + std::to_string(expected) + " mode(s)");
    }
    if (a.modes.empty()) r.fail(m, f + "." + key, "expected at least one mode");
    for (std::size_t k = 0; k < a.modes.size(); ++k) mode_ref(m, Reader::index(f + "." + key, k), a.modes[k]);
    if (n["labels"]) {
      a.labels = r.scalar_list(n["labels"], f + ".labels");
      if (a.labels.size() != a.modes.size()) r.fail(n["labels"], f + ".labels", "one label per mode expected");
    }
  }

  void after(const YAML::Node& n, const std::string& f, AnalysisSpec& a, bool required) {
    if (!n["after"]) {
      if (required) r.child(n, f, "after");
      return;
    }
    a.after = r.count(n["after"], f + ".after");
    if (*a.after > cfg.network.size()) r.fail(n["after"], f + ".after", "exceeds the number of network elements");
  }

  void gain(const YAML::Node& n, const std::string& f, AnalysisSpec& a) {
    if (!n["gain"]) return;
    const std::string g = r.scalar(n["gain"], f + ".gain");
    if (g == "optimize") {
      a.gain = g;
      return;
    }
    a.gain = r.expression(n["gain"], f + ".gain", bindings);
    if (!(evaluate_expression(a.gain, bindings) >= 0.0)) r.fail(n["gain"], f + ".gain", "gain must be >= 0");
  }

  void operating_points(const YAML::Node& n, const std::string& f, AnalysisSpec& a) {
    const YAML::Node at = r.child(n, f, "at");
    const auto list = r.scalar_list(at, f + ".at");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const YAML::Node item = at.IsSequence() ? at[k] : at;
      a.at.push_back(r.expression(item, Reader::index(f + ".at", k), bindings));
    }
  }

  void grid(const YAML::Node& n, const std::string& f, AnalysisSpec& a) {
    const YAML::Node g = r.child(n, f, "grid");
    const std::string gf = f + ".grid";
    r.require_map(g, gf);
    r.allow_keys(g, gf, {"from", "to", "points", "values"});
    std::vector<double> v;
    if (g["values"]) {
      const YAML::Node vals = g["values"];
      if (!vals.IsSequence() || vals.size() < 1) r.fail(vals, gf + ".values", "expected a non-empty list");
      for (std::size_t k = 0; k < vals.size(); ++k) {
        a.grid.values.push_back(r.expression(vals[k], Reader::index(gf + ".values", k), bindings));
        v.push_back(evaluate_expression(a.grid.values.back(), bindings));
      }
      const bool up = std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
      const bool down = std::adjacent_find(v.begin(), v.end(), std::less_equal<>()) == v.end();
      if (!up && !down) r.fail(vals, gf + ".values", "grid must be strictly monotone");
      return;
    }
    a.grid.from = r.expression(r.child(g, gf, "from"), gf + ".from", bindings);
    a.grid.to = r.expression(r.child(g, gf, "to"), gf + ".to", bindings);
    a.grid.points = r.count(r.child(g, gf, "points"), gf + ".points");
    if (a.grid.points < 1) r.fail(g["points"], gf + ".points", "need at least one point");
    if (a.grid.points > 1 &&
        evaluate_expression(a.grid.from, bindings) == evaluate_expression(a.grid.to, bindings)) {
      r.fail(g, gf, "grid must be strictly monotone (from == to)");
    }
  }

  void analyses(const YAML::Node& root) {
    const YAML::Node list = r.child(root, "", "analyses");
    if (!list.IsSequence() || list.size() == 0) r.fail(list, "analyses", "expected a non-empty list");
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string f = Reader::index("analyses", i);
      const YAML::Node n = list[i];
      r.require_map(n, f);
      const std::string type = r.scalar(r.child(n, f, "type"), f + ".type");
      AnalysisSpec a;
      if (type == "criterion") {
        a.kind = AnalysisKind::criterion;
        r.allow_keys(n, f, {"type", "name", "modes", "gain", "after"});
        arms(n, f, "modes", a, 2);
        if (a.modes[0] == a.modes[1]) r.fail(n["modes"], f + ".modes", "modes must be distinct");
        gain(n, f, a);
        after(n, f, a, false);
      } else if (type == "polarization_criterion") {
        a.kind = AnalysisKind::polarization_criterion;
        r.allow_keys(n, f, {"type", "name", "beams", "gain", "after"});
        const YAML::Node b = r.child(n, f, "beams");
        if (!b.IsSequence() || b.size() != 2) r.fail(b, f + ".beams", "expected two beams [[x, y], [x, y]]");
        std::set<std::string> used;
        for (std::size_t k = 0; k < 2; ++k) {
          const std::string bf = Reader::index(f + ".beams", k);
          const auto xy = r.scalar_list(b[k], bf);
          if (xy.size() != 2) r.fail(b[k], bf, "expected [x, y]");
          for (const auto& m : xy) {
            mode_ref(b[k], bf, m);
            if (!used.insert(m).second) r.fail(b[k], bf, "beams must use four distinct modes");
          }
          a.beams.emplace_back(xy[0], xy[1]);
        }
        gain(n, f, a);
        after(n, f, a, false);
      } else if (type == "theta_scan") {
        a.kind = AnalysisKind::theta_scan;
        r.allow_keys(n, f, {"type", "name", "parameter", "grid", "arms", "labels"});
        scanned_parameter(n, f, a);
        grid(n, f, a);
        arms(n, f, "arms", a, 0);
      } else if (type == "sensitivity") {
        a.kind = AnalysisKind::sensitivity;
        r.allow_keys(n, f, {"type", "name", "parameter", "at", "arm", "labels", "coherent_reference"});
        scanned_parameter(n, f, a);
        operating_points(n, f, a);
        arms(n, f, "arm", a, 1);
        if (n["coherent_reference"]) a.coherent_reference = r.boolean(n["coherent_reference"], f + ".coherent_reference");
      } else if (type == "dense_coding") {
        a.kind = AnalysisKind::dense_coding;
        r.allow_keys(n, f, {"type", "name", "parameter", "at", "arms", "labels", "after", "modulation", "strict"});
        scanned_parameter(n, f, a);
        operating_points(n, f, a);
        arms(n, f, "arms", a, 2);
        if (a.modes[0] == a.modes[1]) r.fail(n["arms"], f + ".arms", "arms must be distinct");
        after(n, f, a, true);
        const YAML::Node m = r.child(n, f, "modulation");
        r.require_map(m, f + ".modulation");
        r.allow_keys(m, f + ".modulation", {"v_x", "v_y"});
        for (auto [key, target] : {std::pair{"v_x", &a.v_x_mod}, std::pair{"v_y", &a.v_y_mod}}) {
          if (!m[key]) continue;
          *target = r.expression(m[key], f + ".modulation." + key, bindings);
          if (!(evaluate_expression(*target, bindings) >= 0.0)) {
            r.fail(m[key], f + ".modulation." + key, "modulation variance must be >= 0");
          }
        }
        if (n["strict"]) a.strict = r.boolean(n["strict"], f + ".strict");
      } else {
        r.fail(n["type"], f + ".type", "unknown analysis type '" + type + "'");
      }
      a.name = n["name"] ? r.scalar(n["name"], f + ".name") : type + "_" + std::to_string(i);
      if (a.name.empty() || a.name.find_first_of("/\\") != std::string::npos) {
        r.fail(n["name"], f + ".name", "name must be non-empty without path separators");
      }
      if (!names.insert(a.name).second) r.fail(n, f + ".name", "duplicate analysis name '" + a.name + "'");
      cfg.analyses.push_back(std::move(a));
    }
  }

  void oracle(const YAML::Node& root) {
    const YAML::Node o = root["oracle"];
    if (!o.IsDefined() || o.IsNull()) return;
    r.require_map(o, "oracle");
    r.allow_keys(o, "oracle", {"enabled", "seed", "samples", "spot_points"});
    if (o["enabled"]) cfg.oracle.enabled = r.boolean(o["enabled"], "oracle.enabled");
    if (o["seed"]) cfg.oracle.seed = r.u64(o["seed"], "oracle.seed");
    if (o["samples"]) {
      cfg.oracle.samples = r.count(o["samples"], "oracle.samples");
      if (cfg.oracle.samples < 1000) r.fail(o["samples"], "oracle.samples", "must be >= 1000");
    }
    if (o["spot_points"]) cfg.oracle.spot_points = r.count(o["spot_points"], "oracle.spot_points");
  }

  void output(const YAML::Node& root) {
    const YAML::Node o = root["output"];
    if (!o.IsDefined() || o.IsNull()) return;
    r.require_map(o, "output");
    r.allow_keys(o, "output", {"directory"});
    if (o["directory"]) cfg.output_directory = r.scalar(o["directory"], "output.directory");
  }

  void run(const YAML::Node& root) {
    r.require_map(root, "");
    r.allow_keys(root, "", {"name", "description", "parameters", "sources", "network", "analyses", "oracle", "output"});
    if (root["name"]) cfg.name = r.scalar(root["name"], "name");
    if (root["description"]) cfg.description = r.scalar(root["description"], "description");
    parameters(root);
    sources(root);
    network(root);
    analyses(root);
    oracle(root);
    output(root);
  }
};

double eval(const std::string& text, const Bindings& b) { return evaluate_expression(text, b); }

void emit_expr(YAML::Emitter& out, const std::string& text) { out << YAML::Value << text; }

}  // namespace

ConfigError::ConfigError(std::string file, int line, int column, std::string field, const std::string& message)
    : std::runtime_error(location(file, line, column) + ": " + (field.empty() ? "" : "field '" + field + "': ") +
                         message),
      file_(std::move(file)),
      line_(line),
      column_(column),
      field_(std::move(field)) {}

std::size_t ScenarioConfig::mode_index(const std::string& label) const {
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].label == label) return i;
  }
  throw std::out_of_range("no source labelled '" + label + "'");
}

ScenarioConfig parse_config(const std::string& text, const std::string& file) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(file, e.mark.line + 1, e.mark.column + 1, "", e.msg);
  }
  Parser p{Reader(file), {}, {}, {}};
  try {
    p.run(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError(file, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.mark.column + 1, "", e.msg);
  }
  return p.cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::phase_shift: return "phase_shift";
    case StepKind::beam_splitter: return "beam_splitter";
    case StepKind::polarizing_combiner: return "polarizing_combiner";
    case StepKind::modulation: return "modulation";
  }
  return "?";
}

const char* to_string(AnalysisKind kind) {
  switch (kind) {
    case AnalysisKind::criterion: return "criterion";
    case AnalysisKind::polarization_criterion: return "polarization_criterion";
    case AnalysisKind::theta_scan: return "theta_scan";
    case AnalysisKind::sensitivity: return "sensitivity";
    case AnalysisKind::dense_coding: return "dense_coding";
  }
  return "?";
}

std::string to_yaml(const ScenarioConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  if (!c.name.empty()) out << YAML::Key << "name" << YAML::Value << c.name;
  if (!c.description.empty()) out << YAML::Key << "description" << YAML::Value << c.description;
  if (!c.parameters.empty()) {
    out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : c.parameters) out << YAML::Key << k << YAML::Value << v;
    out << YAML::EndMap;
  }
  out << YAML::Key << "sources" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : c.sources) {
    out << YAML::BeginMap << YAML::Key << "label" << YAML::Value << s.label << YAML::Key << "amplitude";
    if (s.complex_amplitude) {
      out << YAML::Value << YAML::Flow << YAML::BeginSeq << s.amplitude_re << s.amplitude_im << YAML::EndSeq;
    } else {
      emit_expr(out, s.amplitude_re);
    }
    out << YAML::Key << "squeeze_db";
    emit_expr(out, s.squeeze_db);
    out << YAML::Key << "excess_factor";
    emit_expr(out, s.excess_factor);
    if (!s.polarization.empty()) out << YAML::Key << "polarization" << YAML::Value << s.polarization;
    if (s.squeeze_angle) {
      out << YAML::Key << "squeeze_angle";
      emit_expr(out, *s.squeeze_angle);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  if (!c.network.empty()) {
    out << YAML::Key << "network" << YAML::Value << YAML::BeginSeq;
    for (const auto& st : c.network) {
      out << YAML::BeginMap << YAML::Key << to_string(st.kind) << YAML::Value << YAML::Flow << YAML::BeginMap;
      switch (st.kind) {
        case StepKind::phase_shift:
          out << YAML::Key << "mode" << YAML::Value << st.modes[0] << YAML::Key << "angle" << YAML::Value << st.angle;
          break;
        case StepKind::beam_splitter:
          out << YAML::Key << "modes" << YAML::Value << YAML::Flow << st.modes;
          out << YAML::Key << "transmittance" << YAML::Value << st.transmittance;
          out << YAML::Key << "phase" << YAML::Value << st.phase;
          break;
        case StepKind::polarizing_combiner:
          out << YAML::Key << "x" << YAML::Value << st.modes[0] << YAML::Key << "y" << YAML::Value << st.modes[1];
          out << YAML::Key << "beam" << YAML::Value << st.beam;
          break;
        case StepKind::modulation:
          out << YAML::Key << "mode" << YAML::Value << st.modes[0];
          out << YAML::Key << "amplitude_variance" << YAML::Value << st.amplitude_variance;
          out << YAML::Key << "phase_variance" << YAML::Value << st.phase_variance;
          break;
      }
      out << YAML::EndMap << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  out << YAML::Key << "analyses" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : c.analyses) {
    out << YAML::BeginMap << YAML::Key << "type" << YAML::Value << to_string(a.kind);
    out << YAML::Key << "name" << YAML::Value << a.name;
    const auto emit_labels = [&] {
      if (!a.labels.empty()) out << YAML::Key << "labels" << YAML::Value << YAML::Flow << a.labels;
    };
    const auto emit_after = [&] {
      if (a.after) out << YAML::Key << "after" << YAML::Value << *a.after;
    };
    switch (a.kind) {
      case AnalysisKind::criterion:
        out << YAML::Key << "modes" << YAML::Value << YAML::Flow << a.modes;
        out << YAML::Key << "gain" << YAML::Value << a.gain;
        emit_after();
        break;
      case AnalysisKind::polarization_criterion:
        out << YAML::Key << "beams" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& [x, y] : a.beams) out << YAML::Flow << YAML::BeginSeq << x << y << YAML::EndSeq;
        out << YAML::EndSeq;
        out << YAML::Key << "gain" << YAML::Value << a.gain;
        emit_after();
        break;
      case AnalysisKind::theta_scan:
        out << YAML::Key << "parameter" << YAML::Value << a.parameter;
        out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap;
        if (!a.grid.values.empty()) {
          out << YAML::Key << "values" << YAML::Value << YAML::Flow << a.grid.values;
        } else {
          out << YAML::Key << "from" << YAML::Value << a.grid.from << YAML::Key << "to" << YAML::Value << a.grid.to;
          out << YAML::Key << "points" << YAML::Value << a.grid.points;
        }
        out << YAML::EndMap;
        out << YAML::Key << "arms" << YAML::Value << YAML::Flow << a.modes;
        emit_labels();
        break;
      case AnalysisKind::sensitivity:
        out << YAML::Key << "parameter" << YAML::Value << a.parameter;
        out << YAML::Key << "at" << YAML::Value << YAML::Flow << a.at;
        out << YAML::Key << "arm" << YAML::Value << YAML::Flow << a.modes;
        emit_labels();
        out << YAML::Key << "coherent_reference" << YAML::Value << a.coherent_reference;
        break;
      case AnalysisKind::dense_coding:
        out << YAML::Key << "parameter" << YAML::Value << a.parameter;
        out << YAML::Key << "at" << YAML::Value << YAML::Flow << a.at;
        out << YAML::Key << "arms" << YAML::Value << YAML::Flow << a.modes;
        emit_labels();
        emit_after();
        out << YAML::Key << "modulation" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "v_x"
            << YAML::Value << a.v_x_mod << YAML::Key << "v_y" << YAML::Value << a.v_y_mod << YAML::EndMap;
        out << YAML::Key << "strict" << YAML::Value << a.strict;
        break;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "oracle" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.oracle.enabled;
  out << YAML::Key << "seed" << YAML::Value << c.oracle.seed;
  out << YAML::Key << "samples" << YAML::Value << c.oracle.samples;
  out << YAML::Key << "spot_points" << YAML::Value << c.oracle.spot_points;
  out << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "directory" << YAML::Value
      << c.output_directory << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Bindings evaluate_parameters(const ScenarioConfig& c, const Bindings& overrides) {
  Bindings b;
  for (const auto& [name, text] : c.parameters) {
    const auto it = overrides.find(name);
    b[name] = it != overrides.end() ? it->second : eval(text, b);
  }
  return b;
}

Network build_network(const ScenarioConfig& c, const Bindings& overrides) {
  const Bindings b = evaluate_parameters(c, overrides);
  std::vector<GaussianState> parts;
  for (const auto& s : c.sources) {
    const Complex amp(eval(s.amplitude_re, b), eval(s.amplitude_im, b));
    const double offset = s.squeeze_angle ? eval(*s.squeeze_angle, b) : 0.0;
    parts.push_back(new_squeezed_rotated(amp, eval(s.squeeze_db, b), eval(s.excess_factor, b), offset, s.label));
  }
  Network net;
  net.input = combine(parts);
  for (const auto& st : c.network) {
    switch (st.kind) {
      case StepKind::phase_shift:
        net.steps.push_back(PhaseShift{c.mode_index(st.modes[0]), eval(st.angle, b)});
        break;
      case StepKind::beam_splitter:
        net.steps.push_back(BeamSplitter{c.mode_index(st.modes[0]), c.mode_index(st.modes[1]),
                                         eval(st.transmittance, b), eval(st.phase, b)});
        break;
      case StepKind::polarizing_combiner:
        net.steps.push_back(PolarizingCombiner{c.mode_index(st.modes[0]), c.mode_index(st.modes[1]), st.beam});
        break;
      case StepKind::modulation:
        net.steps.push_back(GaussianModulation{c.mode_index(st.modes[0]), eval(st.amplitude_variance, b),
                                               eval(st.phase_variance, b)});
        break;
    }
  }
  return net;
}

ScenarioConfig coherent_variant(const ScenarioConfig& c) {
  ScenarioConfig out = c;
  for (auto& s : out.sources) {
    s.squeeze_db = "0";
    s.excess_factor = "1";
    s.squeeze_angle.reset();
  }
  return out;
}

}  // namespace cvent::scenario
