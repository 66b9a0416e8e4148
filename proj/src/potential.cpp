#include "mst/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mst {

namespace {

const double y00 = 0.5 / std::sqrt(pi);

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

double gaussian_term(const GaussianMultipole::Term &t, double r, double R) {
  return t.amplitude * std::pow(r, t.index.ell) *
         (std::exp(-(r / t.width) * (r / t.width)) - std::exp(-(R / t.width) * (R / t.width)));
}

} // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw ConfigError("tabulated channel needs at least two (r, value) samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw ConfigError("tabulated radii must be strictly increasing");

  // Natural spline: second derivatives vanish at both ends.
  second_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
    const double p = sig * second_[i - 1] + 2.0;
    second_[i] = (sig - 1.0) / p;
    const double d = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) - (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
    u[i] = (6.0 * d / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
  }
  for (std::size_t k = n - 1; k-- > 0;)
    second_[k] = second_[k] * second_[k + 1] + u[k];
}

double CubicSpline::operator()(double x) const {
  if (x <= x_.front())
    return y_.front();
  if (x >= x_.back())
    return y_.back();
  const auto hi_it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t hi = static_cast<std::size_t>(hi_it - x_.begin());
  const std::size_t lo = hi - 1;
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * second_[lo] + (b * b * b - b) * second_[hi]) * h * h / 6.0;
}

CubicSpline load_channel_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open channel file " + path.string());
  std::vector<double> r, v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("malformed row in " + path.string() + ": " + line);
    }
    first = false;
    r.push_back(a);
    v.push_back(b);
  }
  return CubicSpline(std::move(r), std::move(v));
}

PotentialModel::PotentialModel(Variant model) : model_(std::move(model)) {
  if (!(radius() > 0.0))
    throw ConfigError("potential radius must be positive");
  if (const auto *g = std::get_if<GaussianMultipole>(&model_)) {
    for (const auto &t : g->terms) {
      if (t.index.ell < 0 || std::abs(t.index.m) > t.index.ell)
        throw ConfigError("invalid multipole index");
      if (!(t.width > 0.0))
        throw ConfigError("Gaussian width must be positive");
    }
  }
  if (const auto *c = std::get_if<CappedCoulomb>(&model_))
    if (!(c->strength > 0.0))
      throw ConfigError("Coulomb strength must be positive");
}

double PotentialModel::radius() const {
  return std::visit([](const auto &m) { return m.radius; }, model_);
}

std::vector<int> PotentialModel::components() const {
  return std::visit(overloaded{
                        [](const CappedCoulomb &) { return std::vector<int>{0}; },
                        [](const GaussianMultipole &g) {
                          std::vector<int> out;
                          for (const auto &t : g.terms)
                            out.push_back(t.index.packed());
                          std::sort(out.begin(), out.end());
                          out.erase(std::unique(out.begin(), out.end()), out.end());
                          return out;
                        },
                        [](const TabulatedRadial &t) {
                          std::vector<int> out;
                          for (const auto &[k, _] : t.channels)
                            out.push_back(k);
                          return out;
                        },
                    },
                    model_);
}

bool PotentialModel::is_spherical() const {
  const auto c = components();
  return c.empty() || (c.size() == 1 && c[0] == 0);
}

int PotentialModel::max_degree() const {
  int L = 0;
  for (int c : components())
    L = std::max(L, harmonics::ell_of(c));
  return L;
}

double PotentialModel::coulomb_strength() const {
  if (const auto *c = std::get_if<CappedCoulomb>(&model_))
    return factor_ * c->strength;
  return 0.0;
}

PotentialModel PotentialModel::scaled(double factor) const {
  if (!(factor > 0.0))
    throw DomainError("potential scale factor must be positive");
  PotentialModel out = *this;
  out.factor_ *= factor;
  return out;
}

double PotentialModel::multipole(AngularIndex index, double r) const {
  const double R = radius();
  if (r >= R)
    return 0.0;
  return factor_ * std::visit(overloaded{
                        [&](const CappedCoulomb &c) {
                          if (index.packed() != 0)
                            return 0.0;
                          return std::sqrt(4.0 * pi) * (-c.strength / r + c.strength / R);
                        },
                        [&](const GaussianMultipole &g) {
                          double v = 0.0;
                          for (const auto &t : g.terms)
                            if (t.index == index)
                              v += gaussian_term(t, r, R);
                          return v;
                        },
                        [&](const TabulatedRadial &t) {
                          const auto it = t.channels.find(index.packed());
                          return it == t.channels.end() ? 0.0 : it->second(r);
                        },
                    },
                    model_);
}

double PotentialModel::spherical(double r) const {
  if (const auto *c = std::get_if<CappedCoulomb>(&model_))
    return r >= c->radius ? 0.0 : factor_ * (-c->strength / r + c->strength / c->radius);
  return multipole({0, 0}, r) * y00;
}

double potential_channel(const PotentialModel &model, AngularIndex index, double r) {
  if (std::holds_alternative<CappedCoulomb>(model.model()))
    return model.spherical(r) * (index.packed() == 0 ? 1.0 : 0.0);
  return model.multipole(index, r);
}

} // namespace mst
