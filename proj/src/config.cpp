#include "mst/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace mst::harness {

namespace {

[[noreturn]] void fail(const std::string &field, const std::string &what) {
  throw ConfigError(field + ": " + what);
}

// Rejects keys outside `allowed` so typos do not silently fall back to defaults.
void check_keys(const json &obj, const std::string &field, const std::set<std::string> &allowed) {
  if (!obj.is_object())
    fail(field, "expected an object");
  for (const auto &[key, _] : obj.items())
    if (!allowed.count(key))
      fail(field.empty() ? key : field + "." + key, "unknown field");
}

std::string join(const std::string &field, const std::string &key) {
  return field.empty() ? key : field + "." + key;
}

const json &require(const json &obj, const std::string &field, const std::string &key) {
  if (!obj.contains(key))
    fail(join(field, key), "missing required field");
  return obj.at(key);
}

double number(const json &v, const std::string &field) {
  if (!v.is_number())
    fail(field, "expected a number");
  return v.get<double>();
}

int integer(const json &v, const std::string &field) {
  if (!v.is_number_integer())
    fail(field, "expected an integer");
  return v.get<int>();
}

double positive(const json &v, const std::string &field) {
  const double x = number(v, field);
  if (!(x > 0.0))
    fail(field, "must be positive");
  return x;
}

Vec3 vec3(const json &v, const std::string &field) {
  if (!v.is_array() || v.size() != 3)
    fail(field, "expected an array of three numbers");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]"), number(v[2], field + "[2]")};
}

std::vector<double> numbers(const json &v, const std::string &field) {
  if (!v.is_array())
    fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

AngularIndex angular(const json &obj, const std::string &field) {
  const int l = integer(require(obj, field, "l"), join(field, "l"));
  const int m = integer(require(obj, field, "m"), join(field, "m"));
  if (l < 0 || std::abs(m) > l)
    fail(field, "invalid (l, m) = (" + std::to_string(l) + ", " + std::to_string(m) + ")");
  return {l, m};
}

PotentialModel potential(const json &obj, const std::string &field, const std::filesystem::path &base) {
  if (!obj.is_object())
    fail(field, "expected an object");
  const json &kind_v = require(obj, field, "kind");
  if (!kind_v.is_string())
    fail(join(field, "kind"), "expected a string");
  const std::string kind = kind_v.get<std::string>();
  const double R = positive(require(obj, field, "radius"), join(field, "radius"));

  if (kind == "capped_coulomb") {
    check_keys(obj, field, {"kind", "radius", "strength"});
    return PotentialModel(CappedCoulomb{positive(require(obj, field, "strength"), join(field, "strength")), R});
  }
  if (kind == "gaussian_multipole") {
    check_keys(obj, field, {"kind", "radius", "terms"});
    const json &terms = require(obj, field, "terms");
    const std::string tf = join(field, "terms");
    if (!terms.is_array() || terms.empty())
      fail(tf, "expected a nonempty array");
    GaussianMultipole g{{}, R};
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string f = tf + "[" + std::to_string(i) + "]";
      check_keys(terms[i], f, {"l", "m", "amplitude", "width"});
      g.terms.push_back({angular(terms[i], f), number(require(terms[i], f, "amplitude"), f + ".amplitude"),
                         positive(require(terms[i], f, "width"), f + ".width")});
    }
    return PotentialModel(std::move(g));
  }
  if (kind == "tabulated") {
    check_keys(obj, field, {"kind", "radius", "channels"});
    const json &channels = require(obj, field, "channels");
    const std::string cf = join(field, "channels");
    if (!channels.is_array() || channels.empty())
      fail(cf, "expected a nonempty array");
    TabulatedRadial t{{}, R};
    for (std::size_t i = 0; i < channels.size(); ++i) {
      const std::string f = cf + "[" + std::to_string(i) + "]";
      const json &c = channels[i];
      check_keys(c, f, {"l", "m", "file", "r", "v"});
      const int key = angular(c, f).packed();
      if (t.channels.count(key))
        fail(f, "duplicate channel");
      try {
        if (c.contains("file")) {
          if (c.contains("r") || c.contains("v"))
            fail(f, "give either file or inline r/v samples, not both");
          if (!c.at("file").is_string())
            fail(f + ".file", "expected a string");
          std::filesystem::path path = c.at("file").get<std::string>();
          if (path.is_relative())
            path = base / path;
          t.channels.emplace(key, load_channel_csv(path));
        } else {
          t.channels.emplace(key, CubicSpline(numbers(require(c, f, "r"), f + ".r"),
                                              numbers(require(c, f, "v"), f + ".v")));
        }
      } catch (const DomainError &e) {
        fail(f, e.what());
      }
    }
    return PotentialModel(std::move(t));
  }
  fail(join(field, "kind"), "unknown potential kind '" + kind + "'");
}

json potential_json(const PotentialModel &model) {
  return std::visit(
      [](const auto &m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CappedCoulomb>) {
          return {{"kind", "capped_coulomb"}, {"strength", m.strength}, {"radius", m.radius}};
        } else if constexpr (std::is_same_v<T, GaussianMultipole>) {
          json terms = json::array();
          for (const auto &t : m.terms)
            terms.push_back({{"l", t.index.ell}, {"m", t.index.m}, {"amplitude", t.amplitude}, {"width", t.width}});
          return {{"kind", "gaussian_multipole"}, {"radius", m.radius}, {"terms", terms}};
        } else {
          json channels = json::array();
          for (const auto &[key, spline] : m.channels) {
            const auto idx = AngularIndex::unpack(key);
            channels.push_back({{"l", idx.ell}, {"m", idx.m}, {"r", spline.x()}, {"v", spline.y()}});
          }
          return {{"kind", "tabulated"}, {"radius", m.radius}, {"channels", channels}};
        }
      },
      model.model());
}

} // namespace

ExperimentSpec parse_config(const json &doc, const std::filesystem::path &base_dir) {
  check_keys(doc, "", {"schema_version", "kinetic", "sites", "L", "window", "step", "tolerances", "mesh_points",
                       "workers", "convergence", "seed", "output", "grid"});
  const int version = integer(require(doc, "", "schema_version"), "schema_version");
  if (version != schema_version)
    fail("schema_version", "unsupported version " + std::to_string(version) + " (expected " +
                               std::to_string(schema_version) + ")");

  ExperimentSpec spec;
  auto &sys = spec.system;
  if (doc.contains("kinetic"))
    sys.kinetic = positive(doc.at("kinetic"), "kinetic");

  const json &sites = require(doc, "", "sites");
  if (!sites.is_array() || sites.empty())
    fail("sites", "expected a nonempty array");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::string f = "sites[" + std::to_string(i) + "]";
    check_keys(sites[i], f, {"position", "potential"});
    sys.sites.push_back({vec3(require(sites[i], f, "position"), f + ".position"),
                         potential(require(sites[i], f, "potential"), f + ".potential", base_dir)});
  }

  if (doc.contains("L")) {
    sys.L = integer(doc.at("L"), "L");
    if (sys.L < 0)
      fail("L", "must be nonnegative");
  }
  const json &window = require(doc, "", "window");
  if (!window.is_array() || window.size() != 2)
    fail("window", "expected [E_lo, E_hi]");
  sys.E_lo = number(window[0], "window[0]");
  sys.E_hi = number(window[1], "window[1]");
  if (!(sys.E_hi < 0.0))
    fail("window", "E_hi must be negative (bound states only)");
  if (sys.E_lo > sys.E_hi)
    fail("window", "E_lo must not exceed E_hi");
  if (doc.contains("step"))
    sys.step = positive(doc.at("step"), "step");
  if (doc.contains("tolerances")) {
    const json &t = doc.at("tolerances");
    check_keys(t, "tolerances", {"singular", "refine", "assumption"});
    if (t.contains("singular"))
      sys.singular_tol = positive(t.at("singular"), "tolerances.singular");
    if (t.contains("refine"))
      sys.refine_tol = positive(t.at("refine"), "tolerances.refine");
    if (t.contains("assumption"))
      sys.assumption_tol = positive(t.at("assumption"), "tolerances.assumption");
  }
  if (doc.contains("mesh_points")) {
    sys.mesh_points = integer(doc.at("mesh_points"), "mesh_points");
    if (sys.mesh_points < 8)
      fail("mesh_points", "must be at least 8");
  }
  if (doc.contains("workers")) {
    sys.workers = integer(doc.at("workers"), "workers");
    if (sys.workers < 1)
      fail("workers", "must be at least 1");
  }

  if (doc.contains("convergence")) {
    const json &c = doc.at("convergence");
    check_keys(c, "convergence", {"L_list", "L_ref", "guard"});
    if (c.contains("L_ref")) {
      spec.L_ref = integer(c.at("L_ref"), "convergence.L_ref");
      if (spec.L_ref < 0)
        fail("convergence.L_ref", "must be nonnegative");
    }
    if (c.contains("L_list")) {
      const json &list = c.at("L_list");
      if (!list.is_array() || list.empty())
        fail("convergence.L_list", "expected a nonempty array of cutoffs");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const int L = integer(list[i], "convergence.L_list[" + std::to_string(i) + "]");
        if (L < 0)
          fail("convergence.L_list[" + std::to_string(i) + "]", "must be nonnegative");
        spec.L_list.push_back(L);
      }
    }
    if (c.contains("guard"))
      spec.guard = positive(c.at("guard"), "convergence.guard");
  }
  if (spec.L_list.empty())
    for (int L = 0; L < spec.L_ref; ++L)
      spec.L_list.push_back(L);
  std::sort(spec.L_list.begin(), spec.L_list.end());
  spec.L_list.erase(std::unique(spec.L_list.begin(), spec.L_list.end()), spec.L_list.end());
  if (!(spec.L_ref > spec.L_list.back()))
    fail("convergence.L_ref", "must exceed every cutoff in L_list");

  if (doc.contains("seed")) {
    const json &s = doc.at("seed");
    if (!s.is_number_unsigned())
      fail("seed", "expected a nonnegative integer");
    spec.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string())
      fail("output", "expected a string");
    spec.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("grid")) {
    const json &g = doc.at("grid");
    check_keys(g, "grid", {"lo", "hi", "counts"});
    GridSpec grid;
    grid.lo = vec3(require(g, "grid", "lo"), "grid.lo");
    grid.hi = vec3(require(g, "grid", "hi"), "grid.hi");
    const json &counts = require(g, "grid", "counts");
    if (!counts.is_array() || counts.size() != 3)
      fail("grid.counts", "expected three positive integers");
    for (int a = 0; a < 3; ++a) {
      grid.counts[a] = integer(counts[a], "grid.counts[" + std::to_string(a) + "]");
      if (grid.counts[a] < 1)
        fail("grid.counts[" + std::to_string(a) + "]", "must be positive");
    }
    spec.grid = grid;
  }

  try {
    kkr::validate(sys);
  } catch (const DomainError &e) {
    throw ConfigError(e.what());
  }
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(path.string() + ": cannot open configuration file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const ExperimentSpec &spec) {
  const auto &sys = spec.system;
  json sites = json::array();
  for (const auto &s : sys.sites)
    sites.push_back({{"position", {s.position.x(), s.position.y(), s.position.z()}},
                     {"potential", potential_json(s.potential)}});
  json doc = {{"schema_version", schema_version},
              {"kinetic", sys.kinetic},
              {"sites", sites},
              {"L", sys.L},
              {"window", {sys.E_lo, sys.E_hi}},
              {"step", sys.step},
              {"tolerances",
               {{"singular", sys.singular_tol}, {"refine", sys.refine_tol}, {"assumption", sys.assumption_tol}}},
              {"mesh_points", sys.mesh_points},
              {"workers", sys.workers},
              {"convergence", {{"L_list", spec.L_list}, {"L_ref", spec.L_ref}, {"guard", spec.guard}}},
              {"seed", spec.seed},
              {"output", spec.output}};
  if (spec.grid)
    doc["grid"] = {{"lo", {spec.grid->lo.x(), spec.grid->lo.y(), spec.grid->lo.z()}},
                   {"hi", {spec.grid->hi.x(), spec.grid->hi.y(), spec.grid->hi.z()}},
                   {"counts", spec.grid->counts}};
  return doc;
}

std::string config_hash(const ExperimentSpec &spec) {
  // Worker count does not change results, so it is left out of the hash.
  json doc = to_json(spec);
  doc.erase("workers");
  const std::string text = doc.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace mst::harness
