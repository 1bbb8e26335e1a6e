#include "ltesim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ltesim/error.hpp"
#include "ltesim/forward.hpp"

namespace ltesim {

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::ForwardNess, "forward-ness"},
    {ExperimentKind::DualHitting, "dual-hitting"},
    {ExperimentKind::Harmonic, "harmonic"},
    {ExperimentKind::DualityCheck, "duality-check"},
    {ExperimentKind::EquilibriumCheck, "equilibrium-check"},
    {ExperimentKind::PoissonCheck, "poisson-check"},
    {ExperimentKind::ConditionalLte, "conditional-lte"},
    {ExperimentKind::StickingTail, "sticking-tail"},
};

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where.empty() ? "<root>" : where, "expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (ok.count(key) == 0) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "cannot parse '" + node.Scalar() + "'");
  }
}

// Counts may be written as 1e6 in YAML.
std::uint64_t count(const YAML::Node& node, const std::string& field) {
  const double v = scalar<double>(node, field);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.2e18) throw ConfigError(field, "expected a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t positive_count(const YAML::Node& node, const std::string& field) {
  const auto v = count(node, field);
  if (v == 0) throw ConfigError(field, "must be positive");
  return v;
}

RealPoint real_point(const YAML::Node& node, const std::string& field) {
  RealPoint out;
  if (node.IsScalar()) {
    out.push_back(scalar<double>(node, field));
    return out;
  }
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(field, "expected a number or a list of numbers");
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(scalar<double>(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Point int_point(const YAML::Node& node, const std::string& field) {
  Point out;
  for (double x : real_point(node, field)) {
    if (x != std::floor(x)) throw ConfigError(field, "expected integer coordinates");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::uint64_t parse_seed(const YAML::Node& node) {
  if (!node.IsScalar()) throw ConfigError("seed", "expected an integer");
  const std::string& s = node.Scalar();
  try {
    if (!s.empty() && s[0] == '-') return static_cast<std::uint64_t>(node.as<std::int64_t>());
    return node.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    throw ConfigError("seed", "expected a 64-bit integer, got '" + s + "'");
  }
}

DomainSpec parse_domain(const YAML::Node& node) {
  if (!node) throw ConfigError("domain", "required");
  check_keys(node, "domain", {"shape", "lower", "upper", "center", "radius"});
  if (!node["shape"]) throw ConfigError("domain.shape", "required");
  const auto shape = scalar<std::string>(node["shape"], "domain.shape");
  DomainSpec spec = DomainSpec::interval(0.0, 1.0);
  if (shape == "interval") {
    const double lo = node["lower"] ? scalar<double>(node["lower"], "domain.lower") : 0.0;
    const double hi = node["upper"] ? scalar<double>(node["upper"], "domain.upper") : 1.0;
    spec = DomainSpec::interval(lo, hi);
  } else if (shape == "rectangle") {
    if (!node["lower"]) throw ConfigError("domain.lower", "required for a rectangle");
    if (!node["upper"]) throw ConfigError("domain.upper", "required for a rectangle");
    spec = DomainSpec::rectangle(real_point(node["lower"], "domain.lower"), real_point(node["upper"], "domain.upper"));
  } else if (shape == "ball") {
    if (!node["center"]) throw ConfigError("domain.center", "required for a ball");
    if (!node["radius"]) throw ConfigError("domain.radius", "required for a ball");
    spec = DomainSpec::ball(real_point(node["center"], "domain.center"), scalar<double>(node["radius"], "domain.radius"));
  } else {
    throw ConfigError("domain.shape", "expected interval, rectangle or ball, got '" + shape + "'");
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("domain." + e.field(), e.what());
  }
  return spec;
}

TemperatureSpec parse_temperature(const YAML::Node& node) {
  if (!node) throw ConfigError("temperature", "required");
  check_keys(node, "temperature", {"kind", "value", "left", "right", "offset", "gradient"});
  if (!node["kind"]) throw ConfigError("temperature.kind", "required");
  const auto kind = scalar<std::string>(node["kind"], "temperature.kind");
  TemperatureSpec t;
  if (kind == "constant") {
    t.kind = TemperatureSpec::Kind::Constant;
    if (!node["value"]) throw ConfigError("temperature.value", "required for a constant temperature");
    t.value = scalar<double>(node["value"], "temperature.value");
    if (!(t.value > 0.0)) throw ConfigError("temperature.value", "must be positive");
  } else if (kind == "endpoints") {
    t.kind = TemperatureSpec::Kind::Endpoints;
    if (!node["left"]) throw ConfigError("temperature.left", "required");
    if (!node["right"]) throw ConfigError("temperature.right", "required");
    t.left = scalar<double>(node["left"], "temperature.left");
    t.right = scalar<double>(node["right"], "temperature.right");
    if (!(t.left > 0.0)) throw ConfigError("temperature.left", "must be positive");
    if (!(t.right > 0.0)) throw ConfigError("temperature.right", "must be positive");
  } else if (kind == "linear") {
    t.kind = TemperatureSpec::Kind::Linear;
    if (!node["gradient"]) throw ConfigError("temperature.gradient", "required");
    t.offset = node["offset"] ? scalar<double>(node["offset"], "temperature.offset") : 0.0;
    t.gradient = real_point(node["gradient"], "temperature.gradient");
  } else {
    throw ConfigError("temperature.kind", "expected constant, endpoints or linear, got '" + kind + "'");
  }
  return t;
}

PacketSpec parse_packet(const YAML::Node& node, const std::string& field) {
  check_keys(node, field, {"at", "site", "carried_by", "bath"});
  if (node.size() != 1) throw ConfigError(field, "give exactly one of at, site, carried_by, bath");
  PacketSpec p;
  if (node["at"]) {
    p.kind = PacketSpec::Kind::Scaled;
    p.x = real_point(node["at"], field + ".at");
  } else if (node["site"]) {
    p.kind = PacketSpec::Kind::Site;
    p.point = int_point(node["site"], field + ".site");
  } else if (node["carried_by"]) {
    p.kind = PacketSpec::Kind::Carried;
    p.particle = count(node["carried_by"], field + ".carried_by");
  } else {
    p.kind = PacketSpec::Kind::Bath;
    p.point = int_point(node["bath"], field + ".bath");
  }
  return p;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nlohmann::json point_json(const Point& p) { return nlohmann::json(p); }

nlohmann::json domain_json(const DomainSpec& d) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          return {{"shape", "interval"}, {"lower", s.lower}, {"upper", s.upper}};
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          return {{"shape", "rectangle"}, {"lower", s.lower}, {"upper", s.upper}};
        } else {
          return {{"shape", "ball"}, {"center", s.center}, {"radius", s.radius}};
        }
      },
      d.shape);
}

bool needs_packets(ExperimentKind k) {
  return k == ExperimentKind::DualHitting || k == ExperimentKind::DualityCheck || k == ExperimentKind::StickingTail;
}

bool needs_particles(ExperimentKind k) { return k != ExperimentKind::Harmonic; }

bool needs_site(ExperimentKind k) {
  return k == ExperimentKind::PoissonCheck || k == ExperimentKind::ConditionalLte;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

BoundaryTemperature TemperatureSpec::build(const DomainSpec& domain) const {
  switch (kind) {
    case Kind::Constant:
      return BoundaryTemperature::constant(value);
    case Kind::Endpoints: {
      const auto* iv = std::get_if<Interval>(&domain.shape);
      if (iv == nullptr) throw ConfigError("temperature.kind", "endpoints needs an interval domain");
      return BoundaryTemperature::endpoints(left, right, iv->lower, iv->upper);
    }
    case Kind::Linear:
      if (static_cast<int>(gradient.size()) != domain.dimension()) {
        throw ConfigError("temperature.gradient", "length must equal the domain dimension");
      }
      return BoundaryTemperature::linear(offset, gradient);
  }
  throw ConfigError("temperature.kind", "unsupported");
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", std::string("YAML syntax error: ") + e.what());
  }
  if (!root || root.IsNull()) throw ConfigError("<root>", "empty configuration");
  check_keys(root, "",
             {"experiment", "domain", "L", "temperature", "particles", "density", "seed", "replicas", "workers",
              "sampling", "observe", "packets", "mesoscopic", "step_cap", "t_events", "initial_energy", "tolerance",
              "probe", "site", "count_offsets", "cap", "orders", "min_occurrences", "max_order",
              "occupation_stride", "episodes", "max_k", "output"});

  RunConfig c;
  if (!root["experiment"]) throw ConfigError("experiment", "required");
  const auto kind_name = scalar<std::string>(root["experiment"], "experiment");
  const auto kind = parse_experiment_kind(kind_name);
  if (!kind) throw ConfigError("experiment", "unknown experiment kind '" + kind_name + "'");
  c.kind = *kind;

  c.domain = parse_domain(root["domain"]);
  if (!root["L"]) throw ConfigError("L", "required");
  c.scale = scalar<double>(root["L"], "L");
  if (!(c.scale > 0.0) || !std::isfinite(c.scale)) throw ConfigError("L", "must be positive");
  c.temperature = parse_temperature(root["temperature"]);
  c.temperature.build(c.domain);

  if (root["particles"] && root["density"]) throw ConfigError("particles", "give either particles or density, not both");
  if (root["particles"]) c.particles = positive_count(root["particles"], "particles");
  if (root["density"]) {
    c.density = scalar<double>(root["density"], "density");
    if (!(*c.density > 0.0)) throw ConfigError("density", "must be positive");
  }
  if (needs_particles(c.kind) && !c.particles && !c.density) throw ConfigError("particles", "required (or density)");

  if (root["seed"]) c.seed = parse_seed(root["seed"]);
  if (root["replicas"]) c.replicas = positive_count(root["replicas"], "replicas");
  if (root["workers"]) c.workers = static_cast<unsigned>(count(root["workers"], "workers"));

  if (const auto s = root["sampling"]) {
    check_keys(s, "sampling", {"burn_in", "events", "thinning", "batches"});
    if (s["burn_in"]) c.sampling.burn_in = count(s["burn_in"], "sampling.burn_in");
    if (s["events"]) c.sampling.events = positive_count(s["events"], "sampling.events");
    if (s["thinning"]) c.sampling.thinning = positive_count(s["thinning"], "sampling.thinning");
    if (s["batches"]) c.sampling.batches = positive_count(s["batches"], "sampling.batches");
  }

  if (const auto o = root["observe"]) {
    if (!o.IsSequence()) throw ConfigError("observe", "expected a list of lattice points");
    for (std::size_t i = 0; i < o.size(); ++i) c.observe.push_back(int_point(o[i], "observe[" + std::to_string(i) + "]"));
  }

  if (const auto p = root["packets"]) {
    if (!p.IsSequence()) throw ConfigError("packets", "expected a list");
    for (std::size_t i = 0; i < p.size(); ++i) c.packets.push_back(parse_packet(p[i], "packets[" + std::to_string(i) + "]"));
  }
  if (const auto m = root["mesoscopic"]) {
    check_keys(m, "mesoscopic", {"x", "theta", "offsets"});
    MesoscopicSpec ms;
    if (!m["x"]) throw ConfigError("mesoscopic.x", "required");
    if (!m["theta"]) throw ConfigError("mesoscopic.theta", "required");
    if (!m["offsets"] || !m["offsets"].IsSequence() || m["offsets"].size() == 0) {
      throw ConfigError("mesoscopic.offsets", "required: a nonempty list of offsets");
    }
    ms.x = real_point(m["x"], "mesoscopic.x");
    ms.theta = scalar<double>(m["theta"], "mesoscopic.theta");
    if (!(ms.theta > 0.0 && ms.theta < 1.0)) throw ConfigError("mesoscopic.theta", "must lie in (0,1)");
    for (std::size_t i = 0; i < m["offsets"].size(); ++i) {
      ms.offsets.push_back(real_point(m["offsets"][i], "mesoscopic.offsets[" + std::to_string(i) + "]"));
    }
    c.mesoscopic = std::move(ms);
  }
  if (!c.packets.empty() && c.mesoscopic) throw ConfigError("packets", "give either packets or mesoscopic, not both");
  if (needs_packets(c.kind) && c.packets.empty() && !c.mesoscopic) throw ConfigError("packets", "required");
  if (root["step_cap"]) c.step_cap = positive_count(root["step_cap"], "step_cap");

  if (root["t_events"]) c.t_events = count(root["t_events"], "t_events");
  if (c.kind == ExperimentKind::DualityCheck && !root["t_events"]) throw ConfigError("t_events", "required");
  if (root["initial_energy"]) {
    c.initial_energy = scalar<double>(root["initial_energy"], "initial_energy");
    if (!(c.initial_energy >= 0.0)) throw ConfigError("initial_energy", "must be nonnegative");
  }
  if (root["tolerance"]) {
    c.tolerance = scalar<double>(root["tolerance"], "tolerance");
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
  }
  if (root["probe"]) c.probe = real_point(root["probe"], "probe");

  if (root["site"]) c.site = real_point(root["site"], "site");
  if (needs_site(c.kind) && c.site.empty()) throw ConfigError("site", "required");
  if (const auto co = root["count_offsets"]) {
    if (!co.IsSequence() || co.size() == 0) throw ConfigError("count_offsets", "expected a nonempty list");
    c.count_offsets.clear();
    for (std::size_t i = 0; i < co.size(); ++i) {
      c.count_offsets.push_back(int_point(co[i], "count_offsets[" + std::to_string(i) + "]"));
    }
  }
  if (root["cap"]) c.cap = positive_count(root["cap"], "cap");
  if (const auto o = root["orders"]) {
    check_keys(o, "orders", {"site", "particles"});
    if (o["site"]) c.site_order = static_cast<unsigned>(count(o["site"], "orders.site"));
    c.particle_orders.clear();
    if (const auto po = o["particles"]) {
      if (!po.IsSequence()) throw ConfigError("orders.particles", "expected a list (its length is K)");
      for (std::size_t i = 0; i < po.size(); ++i) {
        c.particle_orders.push_back(
            static_cast<unsigned>(count(po[i], "orders.particles[" + std::to_string(i) + "]")));
      }
    }
    if (c.particle_orders.size() > 8) throw ConfigError("orders.particles", "K must be at most 8");
  }
  if (root["min_occurrences"]) c.min_occurrences = count(root["min_occurrences"], "min_occurrences");
  if (root["max_order"]) {
    c.max_order = static_cast<unsigned>(positive_count(root["max_order"], "max_order"));
    if (c.max_order > 3) throw ConfigError("max_order", "at most 3 is tracked");
  }
  if (root["occupation_stride"]) c.occupation_stride = count(root["occupation_stride"], "occupation_stride");
  if (root["episodes"]) c.episodes = positive_count(root["episodes"], "episodes");
  if (root["max_k"]) c.max_k = static_cast<unsigned>(positive_count(root["max_k"], "max_k"));

  if (const auto o = root["output"]) {
    check_keys(o, "output", {"dir", "prefix"});
    if (o["dir"]) c.out_dir = scalar<std::string>(o["dir"], "output.dir");
    if (o["prefix"]) c.prefix = scalar<std::string>(o["prefix"], "output.prefix");
    if (c.prefix.empty() || c.prefix.find('/') != std::string::npos) {
      throw ConfigError("output.prefix", "must be a nonempty file name stem");
    }
  }

  if (c.kind == ExperimentKind::EquilibriumCheck && c.temperature.kind != TemperatureSpec::Kind::Constant) {
    throw ConfigError("temperature.kind", "equilibrium-check needs a constant temperature");
  }
  if (c.kind == ExperimentKind::DualityCheck && c.replicas < 2) {
    throw ConfigError("replicas", "duality-check needs at least 2 replicas per side");
  }
  if (c.kind == ExperimentKind::DualHitting && c.replicas < 2) {
    throw ConfigError("replicas", "dual-hitting needs at least 2 replicas");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read configuration file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::size_t resolved_particles(const RunConfig& config, const LatticeDomain& lattice) {
  if (config.particles) return *config.particles;
  if (config.density) {
    const auto m = static_cast<std::size_t>(std::llround(*config.density * static_cast<double>(lattice.num_sites())));
    if (m == 0) throw ConfigError("density", "resolves to zero particles");
    return m;
  }
  return 0;
}

void validate_config(const RunConfig& c) {
  const int d = c.domain.dimension();
  const LatticeDomain lat = build_lattice(c.domain, c.scale);
  const std::size_t m = resolved_particles(c, lat);

  auto check_dim = [d](std::size_t n, const std::string& field) {
    if (static_cast<int>(n) != d) throw ConfigError(field, "expected " + std::to_string(d) + " coordinates");
  };

  for (std::size_t i = 0; i < c.observe.size(); ++i) {
    const std::string f = "observe[" + std::to_string(i) + "]";
    check_dim(c.observe[i].size(), f);
    lat.require_site(c.observe[i], f);
  }
  for (std::size_t i = 0; i < c.packets.size(); ++i) {
    const auto& p = c.packets[i];
    const std::string f = "packets[" + std::to_string(i) + "]";
    switch (p.kind) {
      case PacketSpec::Kind::Scaled:
        check_dim(p.x.size(), f + ".at");
        lat.require_site(scaled_point(p.x, c.scale), f + ".at");
        break;
      case PacketSpec::Kind::Site:
        check_dim(p.point.size(), f + ".site");
        lat.require_site(p.point, f + ".site");
        break;
      case PacketSpec::Kind::Carried:
        if (p.particle >= m) throw ConfigError(f + ".carried_by", "particle index out of range");
        break;
      case PacketSpec::Kind::Bath:
        check_dim(p.point.size(), f + ".bath");
        if (lat.find_bath(p.point) < 0) throw ConfigError(f + ".bath", format_point(p.point) + " is not a bath point");
        break;
    }
  }
  if (c.mesoscopic) {
    check_dim(c.mesoscopic->x.size(), "mesoscopic.x");
    for (std::size_t i = 0; i < c.mesoscopic->offsets.size(); ++i) {
      const std::string f = "mesoscopic.offsets[" + std::to_string(i) + "]";
      check_dim(c.mesoscopic->offsets[i].size(), f);
      lat.require_site(mesoscopic_point(c.mesoscopic->x, c.scale, c.mesoscopic->theta, c.mesoscopic->offsets[i]), f);
    }
  }
  if (c.kind == ExperimentKind::StickingTail) {
    const std::size_t n = c.mesoscopic ? c.mesoscopic->offsets.size() : c.packets.size();
    if (n != 2) throw ConfigError("packets", "sticking-tail needs exactly two packets");
  }
  if (c.probe) {
    check_dim(c.probe->size(), "probe");
    lat.require_site(scaled_point(*c.probe, c.scale), "probe");
  }
  if (!c.site.empty()) {
    check_dim(c.site.size(), "site");
    const Point centre = scaled_point(c.site, c.scale);
    lat.require_site(centre, "site");
    if (c.kind == ExperimentKind::PoissonCheck) {
      for (std::size_t i = 0; i < c.count_offsets.size(); ++i) {
        const std::string f = "count_offsets[" + std::to_string(i) + "]";
        check_dim(c.count_offsets[i].size(), f);
        Point p = centre;
        for (int a = 0; a < d; ++a) p[a] += c.count_offsets[i][a];
        lat.require_site(p, f);
      }
    }
  }
  if (lat.num_bath() > 0) {
    const auto temps = bath_temperatures(c.temperature.build(c.domain), lat);
    for (std::size_t b = 0; b < temps.size(); ++b) {
      if (!(temps[b] > 0.0)) {
        throw ConfigError("temperature", "must be positive on the bath, got " + std::to_string(temps[b]) + " at " +
                                             format_point(lat.bath_point(b)));
      }
    }
  }
  if (c.kind == ExperimentKind::DualityCheck) {
    if (lat.num_sites() > 64) throw ConfigError("L", "duality-check is meant for small lattices (at most 64 sites)");
  }
}

nlohmann::json resolved_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["experiment"] = to_string(c.kind);
  j["domain"] = domain_json(c.domain);
  j["L"] = c.scale;
  json t;
  switch (c.temperature.kind) {
    case TemperatureSpec::Kind::Constant:
      t = {{"kind", "constant"}, {"value", c.temperature.value}};
      break;
    case TemperatureSpec::Kind::Endpoints:
      t = {{"kind", "endpoints"}, {"left", c.temperature.left}, {"right", c.temperature.right}};
      break;
    case TemperatureSpec::Kind::Linear:
      t = {{"kind", "linear"}, {"offset", c.temperature.offset}, {"gradient", c.temperature.gradient}};
      break;
  }
  j["temperature"] = t;

  std::size_t sites = 0;
  std::size_t m = 0;
  try {
    const LatticeDomain lat = build_lattice(c.domain, c.scale);
    sites = lat.num_sites();
    m = resolved_particles(c, lat);
  } catch (const Error&) {
    // Left at zero; validate_config reports the problem.
  }
  j["sites"] = sites;
  j["particles"] = m;
  if (c.density) j["density"] = *c.density;
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["workers"] = c.workers;

  json s;
  s["burn_in"] = c.sampling.burn_in ? *c.sampling.burn_in : default_burn_in(sites, m);
  s["events"] = c.sampling.events;
  s["thinning"] = c.sampling.thinning ? *c.sampling.thinning : static_cast<std::uint64_t>(std::max<std::size_t>(m, 1));
  s["batches"] = c.sampling.batches;
  j["sampling"] = s;

  j["observe"] = json::array();
  for (const auto& p : c.observe) j["observe"].push_back(point_json(p));
  j["packets"] = json::array();
  for (const auto& p : c.packets) {
    switch (p.kind) {
      case PacketSpec::Kind::Scaled:
        j["packets"].push_back({{"at", p.x}, {"site", point_json(scaled_point(p.x, c.scale))}});
        break;
      case PacketSpec::Kind::Site:
        j["packets"].push_back({{"site", point_json(p.point)}});
        break;
      case PacketSpec::Kind::Carried:
        j["packets"].push_back({{"carried_by", p.particle}});
        break;
      case PacketSpec::Kind::Bath:
        j["packets"].push_back({{"bath", point_json(p.point)}});
        break;
    }
  }
  if (c.mesoscopic) {
    json sites_json = json::array();
    for (const auto& v : c.mesoscopic->offsets) {
      sites_json.push_back(point_json(mesoscopic_point(c.mesoscopic->x, c.scale, c.mesoscopic->theta, v)));
    }
    j["mesoscopic"] = {{"x", c.mesoscopic->x},
                       {"theta", c.mesoscopic->theta},
                       {"offsets", c.mesoscopic->offsets},
                       {"sites", sites_json}};
  }
  j["step_cap"] = c.step_cap;
  j["t_events"] = c.t_events;
  j["initial_energy"] = c.initial_energy;
  j["tolerance"] = c.tolerance;
  if (c.probe) j["probe"] = *c.probe;
  if (!c.site.empty()) j["site"] = c.site;
  j["count_offsets"] = json::array();
  for (const auto& p : c.count_offsets) j["count_offsets"].push_back(point_json(p));
  j["cap"] = c.cap;
  j["orders"] = {{"site", c.site_order}, {"particles", c.particle_orders}};
  j["min_occurrences"] = c.min_occurrences;
  j["max_order"] = c.max_order;
  j["occupation_stride"] = c.occupation_stride != 0 ? c.occupation_stride
                                                     : static_cast<std::uint64_t>(sites) * sites * std::max<std::size_t>(m, 1);
  j["episodes"] = c.episodes;
  j["max_k"] = c.max_k;
  j["output"] = {{"dir", c.out_dir.string()}, {"prefix", c.prefix}};
  return j;
}

std::string config_hash(const RunConfig& config) {
  // Output location and worker count do not change results.
  auto j = resolved_json(config);
  j.erase("output");
  j.erase("workers");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

}  // namespace ltesim
