#include "surfns/config.hpp"

#include "surfns/errors.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace surfns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::string origin, std::string key, const Entry& e) : origin_(std::move(origin)), key_(std::move(key)), e_(e) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(origin_ + ":" + std::to_string(e_.line) + ": " + key_ + ": " + what + " (got '" + e_.value +
                      "')");
  }

  double real() const {
    try {
      size_t pos = 0;
      const double v = std::stod(e_.value, &pos);
      if (pos != e_.value.size() || !std::isfinite(v)) fail("expected a finite number");
      return v;
    } catch (const std::logic_error&) {
      fail("expected a finite number");
    }
  }
  double positive() const {
    const double v = real();
    if (!(v > 0)) fail("expected a positive number");
    return v;
  }
  long integer(long lo, long hi) const {
    try {
      size_t pos = 0;
      const long v = std::stol(e_.value, &pos);
      if (pos != e_.value.size()) fail("expected an integer");
      if (v < lo || v > hi) fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return v;
    } catch (const std::logic_error&) {
      fail("expected an integer");
    }
  }
  std::uint64_t u64() const {
    try {
      size_t pos = 0;
      const unsigned long long v = std::stoull(e_.value, &pos);
      if (pos != e_.value.size() || e_.value[0] == '-') fail("expected an unsigned integer");
      return v;
    } catch (const std::logic_error&) {
      fail("expected an unsigned integer");
    }
  }
  bool boolean() const {
    if (e_.value == "true" || e_.value == "1" || e_.value == "yes") return true;
    if (e_.value == "false" || e_.value == "0" || e_.value == "no") return false;
    fail("expected true or false");
  }
  const std::string& text() const { return e_.value; }
  std::string choice(std::initializer_list<const char*> options) const {
    std::string all;
    for (const char* o : options) {
      if (e_.value == o) return e_.value;
      all += all.empty() ? o : std::string(" | ") + o;
    }
    fail("expected one of " + all);
  }
  Eigen::Vector3d vec3() const {
    const auto parts = split(e_.value, ',');
    if (parts.size() != 3) fail("expected three comma-separated numbers");
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) v(i) = sub(parts[i]).real();
    return v;
  }
  std::vector<double> reals() const {
    std::vector<double> out;
    for (const auto& p : split(e_.value, ',')) out.push_back(sub(p).positive());
    if (out.empty()) fail("expected a list of numbers");
    return out;
  }
  std::vector<int> ints(int lo, int hi) const {
    std::vector<int> out;
    for (const auto& p : split(e_.value, ',')) out.push_back(static_cast<int>(sub(p).integer(lo, hi)));
    if (out.empty()) fail("expected a list of integers");
    return out;
  }
  // "l,m:amp; l,m:amp"
  std::vector<ModeAmp> modes() const {
    std::vector<ModeAmp> out;
    for (const auto& item : split(e_.value, ';')) {
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail("expected entries of the form l,m:amplitude");
      const auto lm = split(item.substr(0, colon), ',');
      if (lm.size() != 2) fail("expected entries of the form l,m:amplitude");
      ModeAmp m;
      m.l = static_cast<int>(sub(lm[0]).integer(1, 1024));
      m.m = static_cast<int>(sub(lm[1]).integer(-m.l, m.l));
      m.amp = sub(trim(item.substr(colon + 1))).real();
      out.push_back(m);
    }
    return out;
  }

 private:
  Reader sub(const std::string& v) const {
    sub_.value = v;
    sub_.line = e_.line;
    return Reader(origin_, key_, sub_);
  }
  std::string origin_, key_;
  const Entry& e_;
  mutable Entry sub_;
};

using Setter = std::function<void(Scenario&, const Reader&)>;

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = {
      {"name", [](Scenario& c, const Reader& r) { c.name = r.text(); }},
      {"claims", [](Scenario& c, const Reader& r) { c.claims = r.text(); }},
      {"seed", [](Scenario& c, const Reader& r) { c.seed = r.u64(); }},
      {"L", [](Scenario& c, const Reader& r) { c.L = static_cast<int>(r.integer(1, 128)); }},
      {"geometry.kind",
       [](Scenario& c, const Reader& r) {
         c.kind = r.choice({"sphere", "torus"}) == "sphere" ? SurfaceKind::Sphere : SurfaceKind::Torus;
       }},
      {"geometry.R", [](Scenario& c, const Reader& r) { c.R = r.positive(); }},
      {"geometry.r", [](Scenario& c, const Reader& r) { c.r = r.positive(); }},
      {"geometry.n", [](Scenario& c, const Reader& r) { c.torus_n = static_cast<int>(r.integer(8, 1024)); }},
      {"nu.value", [](Scenario& c, const Reader& r) { c.nu_value = r.positive(); }},
      {"nu.a", [](Scenario& c, const Reader& r) { c.nu_a = r.real(); }},
      {"forcing.tag",
       [](Scenario& c, const Reader& r) {
         try {
           c.forcing = parse_forcing_tag(r.text());
         } catch (const ParameterError&) {
           r.fail("unknown forcing tag");
         }
       }},
      {"forcing.sign",
       [](Scenario& c, const Reader& r) {
         const long v = r.integer(-1, 1);
         if (v == 0) r.fail("expected +1 or -1");
         c.forcing_sign = static_cast<int>(v);
       }},
      {"forcing.field", [](Scenario& c, const Reader& r) { c.forcing_field = r.modes(); }},
      {"forcing.point", [](Scenario& c, const Reader& r) { c.forcing_point = r.vec3(); }},
      {"forcing.c", [](Scenario& c, const Reader& r) { c.forcing_c = r.real(); }},
      {"forcing.axis", [](Scenario& c, const Reader& r) { c.forcing_axis = static_cast<int>(r.integer(1, 3)); }},
      {"init.kind",
       [](Scenario& c, const Reader& r) {
         c.init = r.choice({"modes", "random"}) == "modes" ? InitKind::Modes : InitKind::Random;
       }},
      {"init.modes", [](Scenario& c, const Reader& r) { c.init_modes = r.modes(); }},
      {"init.alpha", [](Scenario& c, const Reader& r) { c.init_alpha = r.vec3(); }},
      {"init.uk",
       [](Scenario& c, const Reader& r) {
         c.init_uk = r.real();
         if (c.init_uk < 0) r.fail("expected a nonnegative number");
       }},
      {"init.unk",
       [](Scenario& c, const Reader& r) {
         c.init_unk = r.real();
         if (c.init_unk < 0) r.fail("expected a nonnegative number");
       }},
      {"time.scheme",
       [](Scenario& c, const Reader& r) {
         c.stepper.scheme = parse_scheme(r.choice({"imex", "rk4"}));
       }},
      {"time.dt", [](Scenario& c, const Reader& r) { c.stepper.dt = r.positive(); }},
      {"time.t_end", [](Scenario& c, const Reader& r) { c.stepper.t_end = r.positive(); }},
      {"time.stride", [](Scenario& c, const Reader& r) { c.stepper.stride = static_cast<int>(r.integer(1, 1 << 30)); }},
      {"time.adaptive", [](Scenario& c, const Reader& r) { c.stepper.adaptive = r.boolean(); }},
      {"time.cfl", [](Scenario& c, const Reader& r) { c.stepper.cfl = r.positive(); }},
      {"dynamics.convection", [](Scenario& c, const Reader& r) { c.convection = r.boolean(); }},
      {"fit.t_min", [](Scenario& c, const Reader& r) { c.fit.t_min = r.real(); }},
      {"fit.t_max", [](Scenario& c, const Reader& r) { c.fit.t_max = r.real(); }},
      {"pair.deltas", [](Scenario& c, const Reader& r) { c.pair_deltas = r.reals(); }},
      {"ensemble.members", [](Scenario& c, const Reader& r) { c.members = static_cast<int>(r.integer(2, 4096)); }},
      {"killing.K", [](Scenario& c, const Reader& r) { c.killing_K = static_cast<int>(r.integer(1, 64)); }},
      {"korn.truncations", [](Scenario& c, const Reader& r) { c.korn_truncations = r.ints(2, 64); }},
  };
  return s;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& known_checks() {
  static const std::vector<std::pair<std::string, std::string>> k = {
      {"ledger", "max |energy residual| / max(E, 1) over samples"},
      {"lambda1_zero", "|lambda_1| of the constant-viscosity Stokes spectrum"},
      {"eigen_decay", "relative error of the first initial mode against exp(-nu lambda_l t)"},
      {"decay_rate", "|zeta / (2 nu lambda_2) - 1| for the fitted decay of |u_NK|^2"},
      {"decay_rate_min", "1 - zeta / (2 nu lambda_2), one-sided"},
      {"omega_max", "tail plateau of |u_NK|^2"},
      {"unk_decreasing", "number of samples where |u_NK| does not strictly decrease"},
      {"uk2", "max | |u_K(t)|^2 - t^2 | (unit Killing forcing, u_K(0) = 0)"},
      {"killing_affine", "max |alpha(t) - alpha(0) - t (f, v)|"},
      {"fd_law", "max |(f_K, u_K(t)) - (f_K, u_K(0)) - t |f_K|^2|"},
      {"uk_nonincreasing", "number of monotonicity violations of |u_K|"},
      {"uk_nondecreasing", "number of monotonicity violations of |u_K|"},
      {"uk_exponential", "max | |u_K(t)| - exp(+-t) |u_K(0)| | under f3"},
      {"unk_bound", "sup_t |u_NK(t)|"},
      {"hypotheses", "number of violated forcing hypotheses (Monte Carlo)"},
      {"contdep_spread", "max / min over the gaps of (sup |w|^2 + int 2 nu |eps(w)|^2) / |w(0)|^2"},
      {"contdep_ratio", "largest (sup |w|^2 + int 2 nu |eps(w)|^2) / |w(0)|^2 over the gaps"},
      {"lambda_affine", "misfit of L(t) - L(0) ~ a t + b int Lambda, over the range of L"},
      {"no_crossing", "number of samples where the difference of the pair vanishes"},
      {"ens_unk_decreasing", "steps where the max-member |u_NK| does not strictly decrease"},
      {"ens_decay_rate_min", "1 - zeta / (2 nu lambda_2) on the max-member |u_NK|^2"},
      {"ens_omega_max", "tail plateau of the max-member |u_NK|^2"},
      {"ens_entry_time", "first t with max-member |u_NK| <= sqrt(1/2 + omega)"},
      {"ens_uk_nondecreasing", "monotonicity violations of the min-member |u_K|"},
      {"ens_constant", "max change of |u|, |u_K|, |u_NK| over all members and samples"},
      {"killing_residual", "max_j |eps(v_j)| / |v_j|_H1 over the Killing basis"},
      {"killing_dim", "| numerical strain-kernel dimension - basis dimension |"},
      {"korn_stable", "relative spread of C_P over korn.truncations"},
      {"korn_inequality", "max over 100 random non-Killing fields of |v|_H1 / (C_P |eps(v)|) - 1"},
  };
  return k;
}

double nu_lower_bound(const Scenario& s) { return s.nu_value - std::abs(s.nu_a); }

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  std::map<std::string, Entry> kv;
  std::vector<std::string> check_order;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + key + ": duplicate key");
    if (key.rfind("check.", 0) == 0) {
      const std::string name = key.substr(6);
      const auto& kc = known_checks();
      if (std::none_of(kc.begin(), kc.end(), [&](const auto& p) { return p.first == name; }))
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + key + ": unknown check");
      check_order.push_back(key);
    } else if (!schema().count(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + key + ": unknown key");
    }
    kv[key] = {value, lineno};
  }

  Scenario s;
  std::string normalized;
  for (const auto& [key, e] : kv) {
    normalized += key + "=" + e.value + "\n";
    if (key.rfind("check.", 0) == 0) continue;
    schema().at(key)(s, Reader(origin, key, e));
  }
  for (const auto& key : check_order) {
    CheckSpec c;
    c.name = key.substr(6);
    c.threshold = Reader(origin, key, kv[key]).real();
    s.checks.push_back(c);
  }
  s.config_hash = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(normalized.data()), static_cast<uInt>(normalized.size())));

  auto fail = [&](const std::string& key, const std::string& what) {
    const auto it = kv.find(key);
    throw ConfigError(origin + (it != kv.end() ? ":" + std::to_string(it->second.line) : std::string()) + ": " + key +
                      ": " + what);
  };
  if (!(nu_lower_bound(s) > 0)) fail("nu.a", "viscosity lower bound nu.value - |nu.a| must be positive");
  if (s.kind == SurfaceKind::Torus && !(s.r < s.R)) fail("geometry.r", "minor radius must be below geometry.R");
  if (s.fit.t_min > s.fit.t_max) fail("fit.t_min", "window is empty");
  for (const auto& m : s.init_modes)
    if (m.l > s.L) fail("init.modes", "mode degree exceeds L");
  for (const auto& m : s.forcing_field)
    if (m.l > s.L) fail("forcing.field", "mode degree exceeds L");
  if (s.init == InitKind::Random && kv.count("init.modes")) fail("init.modes", "not allowed with init.kind = random");
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace surfns
