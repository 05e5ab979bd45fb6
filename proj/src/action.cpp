#include "dlab/action.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlab/error.hpp"

namespace dlab {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 24;

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t time_resolution(const GroupDescriptor& g) {
  if (g.dimension() != 1 ||
      (g.kind() != GroupKind::IntegerLattice && g.kind() != GroupKind::RealGrid)) {
    throw Error(ErrorCode::UnsupportedKind,
                "translation actions need Z or a 1-d real grid as time group, got " + g.describe());
  }
  return g.kind() == GroupKind::RealGrid ? g.resolution() : 1;
}

}  // namespace

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::CircleRotation: return "circle-rotation";
    case ActionKind::TorusTranslation: return "torus-translation";
    case ActionKind::BernoulliWindow: return "bernoulli-window";
    case ActionKind::FinitePermutation: return "finite-permutation";
  }
  return "unknown";
}

std::vector<std::pair<std::int64_t, std::int64_t>> convergents(double x, std::int64_t max_den) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t p0 = 1, q0 = 0;
  std::int64_t p1 = static_cast<std::int64_t>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  out.emplace_back(p1, q1);
  for (int it = 0; it < 60 && frac > 1e-15; ++it) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    frac = inv - static_cast<double>(a);
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    out.emplace_back(p2, q2);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return out;
}

FlowChoice choose_flow(double alpha, std::int64_t target_cells, std::int64_t q) {
  if (q < 1 || target_cells < q) {
    throw Error(ErrorCode::Precondition, "need q >= 1 and target grid side >= q");
  }
  const auto cs = convergents(alpha, target_cells / q);
  const auto [p, r] = cs.back();
  FlowChoice c;
  c.p = p;
  c.r = r;
  c.cells = (target_cells / (r * q)) * (r * q);
  c.target = alpha;
  return c;
}

struct ActionSpace::Impl {
  ActionKind kind;
  GroupDescriptor group;
  std::size_t size = 0;
  std::int64_t n = 0;  // grid side
  std::int64_t step = 1;
  std::int64_t q = 1;
  std::int64_t p = 0;
  std::int64_t r = 1;
  int radius = 0;
  int alphabet = 0;
  int length = 0;
  std::vector<std::vector<std::int64_t>> perms;
  std::vector<std::vector<std::int64_t>> inverses;
  // Z-action cycles: cycle start offset, length and position of each cell.
  std::vector<std::int64_t> cycle_of, pos_in_cycle, cycle_start, cycle_len, cycle_cells;

  explicit Impl(ActionKind k, GroupDescriptor g) : kind(k), group(g) {}

  bool is_translation() const {
    return kind == ActionKind::CircleRotation || kind == ActionKind::TorusTranslation;
  }

  // Exact cell shift of g, or false when g does not land on the grid.
  bool translation(const Element& g, std::int64_t& s1, std::int64_t& s2) const {
    const __int128 j = g.at(0);
    s2 = 0;
    if (kind == ActionKind::CircleRotation) {
      if (group.kind() == GroupKind::IntegerLattice) {
        s1 = static_cast<std::int64_t>((j % n) * step % n);
        s1 = mod(s1, n);
        return true;
      }
      const __int128 num = j * n;
      if (num % q != 0) return false;
      s1 = mod(static_cast<std::int64_t>((num / q) % n), n);
      return true;
    }
    const __int128 a = j * n;
    const __int128 b = j * p * n;
    if (a % q != 0 || b % (static_cast<__int128>(r) * q) != 0) return false;
    s1 = mod(static_cast<std::int64_t>((a / q) % n), n);
    s2 = mod(static_cast<std::int64_t>((b / (static_cast<__int128>(r) * q)) % n), n);
    return true;
  }

  std::int64_t rotate_window(std::int64_t x, std::int64_t k) const {
    // (sigma^-k x)_i = x_{i-k}
    std::vector<int> digits(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(x % alphabet);
      x /= alphabet;
    }
    std::int64_t out = 0;
    for (int i = length - 1; i >= 0; --i) {
      out = out * alphabet + digits[static_cast<std::size_t>(mod(i - k, length))];
    }
    return out;
  }

  std::int64_t act(const Element& g, std::int64_t x) const {
    switch (kind) {
      case ActionKind::CircleRotation:
      case ActionKind::TorusTranslation: {
        std::int64_t s1 = 0, s2 = 0;
        if (!translation(g, s1, s2)) {
          throw Error(ErrorCode::Construction, "atom " + format_element(g) + " is not grid-exact");
        }
        if (kind == ActionKind::CircleRotation) return mod(x - s1, n);
        return mod(x / n - s1, n) * n + mod(x % n - s2, n);
      }
      case ActionKind::BernoulliWindow:
        return rotate_window(x, mod(g.at(0), length));
      case ActionKind::FinitePermutation: {
        if (perms.size() == 1) {
          const auto c = static_cast<std::size_t>(cycle_of[static_cast<std::size_t>(x)]);
          const std::int64_t len = cycle_len[c];
          const std::int64_t pos = mod(pos_in_cycle[static_cast<std::size_t>(x)] - g.at(0), len);
          return cycle_cells[static_cast<std::size_t>(cycle_start[c] + pos)];
        }
        for (auto letter : g) {
          const auto i = static_cast<std::size_t>(std::abs(letter) - 1);
          x = letter > 0 ? inverses[i][static_cast<std::size_t>(x)] : perms[i][static_cast<std::size_t>(x)];
        }
        return x;
      }
    }
    return x;
  }
};

ActionSpace ActionSpace::circle_rotation(const GroupDescriptor& group, std::int64_t cells,
                                         std::int64_t step) {
  const std::int64_t q = time_resolution(group);
  if (cells < 2 || static_cast<std::size_t>(cells) > kMaxCells) {
    throw Error(ErrorCode::Precondition, "circle needs 2 <= N <= 2^24 cells");
  }
  auto impl = std::make_shared<Impl>(ActionKind::CircleRotation, group);
  impl->n = cells;
  impl->q = q;
  impl->step = mod(step, cells);
  impl->size = static_cast<std::size_t>(cells);
  return ActionSpace(std::move(impl));
}

ActionSpace ActionSpace::torus_translation(const GroupDescriptor& time, std::int64_t cells,
                                           std::int64_t p, std::int64_t r) {
  const std::int64_t q = time_resolution(time);
  if (cells < 2 || static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells) > kMaxCells) {
    throw Error(ErrorCode::Precondition, "torus side must satisfy 2 <= N and N^2 <= 2^24");
  }
  if (r < 1) throw Error(ErrorCode::Precondition, "slope denominator must be >= 1");
  auto impl = std::make_shared<Impl>(ActionKind::TorusTranslation, time);
  impl->n = cells;
  impl->q = q;
  impl->p = p;
  impl->r = r;
  impl->size = static_cast<std::size_t>(cells * cells);
  return ActionSpace(std::move(impl));
}

ActionSpace ActionSpace::bernoulli_window(int radius, int alphabet) {
  if (radius < 1 || alphabet < 2) {
    throw Error(ErrorCode::Precondition, "Bernoulli window needs radius >= 1 and alphabet >= 2");
  }
  auto impl = std::make_shared<Impl>(ActionKind::BernoulliWindow,
                                     GroupDescriptor::integer_lattice(1));
  impl->radius = radius;
  impl->alphabet = alphabet;
  impl->length = 2 * radius + 1;
  double cells = std::pow(static_cast<double>(alphabet), impl->length);
  if (cells > static_cast<double>(kMaxCells)) {
    throw Error(ErrorCode::Resource, "window space exceeds 2^24 cells");
  }
  impl->size = static_cast<std::size_t>(std::llround(cells));
  impl->n = impl->length;
  return ActionSpace(std::move(impl));
}

ActionSpace ActionSpace::finite_permutation(std::vector<std::vector<std::int64_t>> generators) {
  if (generators.empty()) throw Error(ErrorCode::Precondition, "need at least one generator");
  const std::size_t n = generators.front().size();
  if (n == 0 || n > kMaxCells) throw Error(ErrorCode::Precondition, "bad permutation size");
  const auto group = generators.size() == 1
                         ? GroupDescriptor::integer_lattice(1)
                         : GroupDescriptor::free_group(static_cast<int>(generators.size()));
  auto impl = std::make_shared<Impl>(ActionKind::FinitePermutation, group);
  for (const auto& perm : generators) {
    if (perm.size() != n) throw Error(ErrorCode::Construction, "generators differ in size");
    std::vector<std::int64_t> inv(n, -1);
    for (std::size_t x = 0; x < n; ++x) {
      const auto y = perm[x];
      if (y < 0 || static_cast<std::size_t>(y) >= n || inv[static_cast<std::size_t>(y)] != -1) {
        throw Error(ErrorCode::Construction, "generator is not a bijection at cell " +
                                                 std::to_string(x));
      }
      inv[static_cast<std::size_t>(y)] = static_cast<std::int64_t>(x);
    }
    impl->inverses.push_back(std::move(inv));
  }
  impl->perms = std::move(generators);
  impl->size = n;
  impl->n = static_cast<std::int64_t>(n);
  if (impl->perms.size() == 1) {
    const auto& perm = impl->perms.front();
    impl->cycle_of.assign(n, -1);
    impl->pos_in_cycle.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (impl->cycle_of[x] != -1) continue;
      const auto id = static_cast<std::int64_t>(impl->cycle_start.size());
      impl->cycle_start.push_back(static_cast<std::int64_t>(impl->cycle_cells.size()));
      std::int64_t len = 0;
      for (auto y = static_cast<std::int64_t>(x); impl->cycle_of[static_cast<std::size_t>(y)] == -1;
           y = perm[static_cast<std::size_t>(y)]) {
        impl->cycle_of[static_cast<std::size_t>(y)] = id;
        impl->pos_in_cycle[static_cast<std::size_t>(y)] = len++;
        impl->cycle_cells.push_back(y);
      }
      impl->cycle_len.push_back(len);
    }
  }
  return ActionSpace(std::move(impl));
}

ActionKind ActionSpace::kind() const { return impl_->kind; }
const GroupDescriptor& ActionSpace::group() const { return impl_->group; }
std::size_t ActionSpace::size() const { return impl_->size; }
std::int64_t ActionSpace::side() const { return impl_->n; }
std::int64_t ActionSpace::slope_num() const { return impl_->p; }
std::int64_t ActionSpace::slope_den() const { return impl_->r; }

int ActionSpace::grid_dimension() const {
  if (impl_->kind == ActionKind::CircleRotation) return 1;
  if (impl_->kind == ActionKind::TorusTranslation) return 2;
  return 0;
}

std::vector<std::int64_t> ActionSpace::coordinates(std::size_t x) const {
  const auto v = static_cast<std::int64_t>(x);
  if (impl_->kind == ActionKind::TorusTranslation) return {v / impl_->n, v % impl_->n};
  return {v};
}

std::size_t ActionSpace::index(const std::vector<std::int64_t>& c) const {
  if (impl_->kind == ActionKind::TorusTranslation) {
    return static_cast<std::size_t>(mod(c.at(0), impl_->n) * impl_->n + mod(c.at(1), impl_->n));
  }
  if (impl_->kind == ActionKind::CircleRotation) {
    return static_cast<std::size_t>(mod(c.at(0), impl_->n));
  }
  return static_cast<std::size_t>(mod(c.at(0), static_cast<std::int64_t>(impl_->size)));
}

std::string ActionSpace::describe() const {
  std::ostringstream os;
  const auto& m = *impl_;
  switch (m.kind) {
    case ActionKind::CircleRotation:
      os << "circle-rotation N=" << m.n;
      if (m.group.kind() == GroupKind::IntegerLattice) os << " step=" << m.step;
      os << " time=" << m.group.describe();
      break;
    case ActionKind::TorusTranslation:
      os << "torus-translation N=" << m.n << " slope=" << m.p << "/" << m.r
         << " time=" << m.group.describe();
      break;
    case ActionKind::BernoulliWindow:
      os << "bernoulli-window radius=" << m.radius << " alphabet=" << m.alphabet
         << " cells=" << m.size;
      break;
    case ActionKind::FinitePermutation:
      os << "finite-permutation cells=" << m.size << " generators=" << m.perms.size();
      break;
  }
  return os.str();
}

bool ActionSpace::admits(const Element& g) const {
  try {
    impl_->group.validate(g);
  } catch (const Error&) {
    return false;
  }
  if (!impl_->is_translation()) return true;
  std::int64_t s1 = 0, s2 = 0;
  return impl_->translation(g, s1, s2);
}

void ActionSpace::require_atoms(const ElementSet& atoms) const {
  std::vector<std::string> bad;
  for (const auto& g : atoms) {
    if (!admits(g)) bad.push_back(format_element(g));
  }
  if (bad.empty()) return;
  std::ostringstream os;
  os << bad.size() << " atom(s) do not act as exact cell permutations on " << describe() << ":";
  for (std::size_t i = 0; i < bad.size() && i < 20; ++i) os << ' ' << bad[i];
  if (bad.size() > 20) os << " ...";
  throw Error(ErrorCode::Construction, os.str());
}

std::vector<std::int64_t> ActionSpace::shift(const Element& g) const {
  if (!impl_->is_translation()) {
    throw Error(ErrorCode::UnsupportedKind, "shift is defined for translation actions only");
  }
  std::int64_t s1 = 0, s2 = 0;
  if (!impl_->translation(g, s1, s2)) {
    throw Error(ErrorCode::Construction, "atom " + format_element(g) + " is not grid-exact");
  }
  if (impl_->kind == ActionKind::CircleRotation) return {s1};
  return {s1, s2};
}

std::size_t ActionSpace::act(const Element& g, std::size_t x) const {
  return static_cast<std::size_t>(impl_->act(g, static_cast<std::int64_t>(x)));
}

void ActionSpace::accumulate_pullback(const Element& g, double coef, std::span<const double> in,
                                      std::span<double> out) const {
  const auto& m = *impl_;
  if (m.kind == ActionKind::TorusTranslation) {
    const auto s = shift(g);
    const std::int64_t n = m.n;
    for (std::int64_t x1 = 0; x1 < n; ++x1) {
      const double* src = in.data() + mod(x1 - s[0], n) * n;
      double* dst = out.data() + x1 * n;
      const std::int64_t s2 = s[1];
      // dst[x2] += coef * src[x2 - s2 mod n]
      for (std::int64_t x2 = 0; x2 < s2; ++x2) dst[x2] += coef * src[x2 - s2 + n];
      for (std::int64_t x2 = s2; x2 < n; ++x2) dst[x2] += coef * src[x2 - s2];
    }
    return;
  }
  if (m.kind == ActionKind::CircleRotation) {
    const std::int64_t s = shift(g)[0];
    const std::int64_t n = m.n;
    for (std::int64_t x = 0; x < s; ++x) out[static_cast<std::size_t>(x)] += coef * in[static_cast<std::size_t>(x - s + n)];
    for (std::int64_t x = s; x < n; ++x) out[static_cast<std::size_t>(x)] += coef * in[static_cast<std::size_t>(x - s)];
    return;
  }
  for (std::size_t x = 0; x < m.size; ++x) {
    out[x] += coef * in[static_cast<std::size_t>(m.act(g, static_cast<std::int64_t>(x)))];
  }
}

void ActionSpace::pullback_sum(const std::vector<std::pair<Element, double>>& atoms,
                               std::span<const double> in, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (impl_->kind != ActionKind::TorusTranslation) {
    for (const auto& [g, c] : atoms) accumulate_pullback(g, c, in, out);
    return;
  }
  const std::int64_t n = impl_->n;
  std::vector<std::int64_t> s1, s2;
  std::vector<double> coef;
  for (const auto& [g, c] : atoms) {
    const auto s = shift(g);
    s1.push_back(s[0]);
    s2.push_back(s[1]);
    coef.push_back(c);
  }
  for (std::int64_t x1 = 0; x1 < n; ++x1) {
    double* dst = out.data() + x1 * n;
    for (std::size_t a = 0; a < coef.size(); ++a) {
      const double* src = in.data() + mod(x1 - s1[a], n) * n;
      const std::int64_t k = s2[a];
      const double c = coef[a];
      for (std::int64_t x2 = 0; x2 < k; ++x2) dst[x2] += c * src[x2 - k + n];
      for (std::int64_t x2 = k; x2 < n; ++x2) dst[x2] += c * src[x2 - k];
    }
  }
}

bool ActionSpace::fixes_some_cell(const Element& g) const {
  const auto& m = *impl_;
  if (m.is_translation()) {
    const auto s = shift(g);
    return std::all_of(s.begin(), s.end(), [](auto c) { return c == 0; });
  }
  if (m.kind == ActionKind::BernoulliWindow) return true;  // constant windows
  for (std::size_t x = 0; x < m.size; ++x) {
    if (m.act(g, static_cast<std::int64_t>(x)) == static_cast<std::int64_t>(x)) return true;
  }
  return false;
}

}  // namespace dlab
