#include "dlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "dlab/error.hpp"

namespace dlab {

namespace {

void require_same_group(const Measure& a, const Measure& b) {
  if (!(a.group() == b.group())) {
    throw Error(ErrorCode::DescriptorMismatch,
                "measures live on " + a.group().describe() + " and " + b.group().describe());
  }
}

bool element_less(const Measure::Atom& x, const Measure::Atom& y) { return x.first < y.first; }

}  // namespace

Measure Measure::from_atoms(GroupDescriptor group, std::vector<Atom> atoms) {
  Measure m(group);
  for (const auto& [g, w] : atoms) {
    group.validate(g);
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::Precondition, "atom mass must be finite and nonnegative at " +
                                               format_element(g));
    }
  }
  std::sort(atoms.begin(), atoms.end(), element_less);
  for (auto& atom : atoms) {
    if (!m.atoms_.empty() && m.atoms_.back().first == atom.first) {
      m.atoms_.back().second += atom.second;
    } else {
      m.atoms_.push_back(std::move(atom));
    }
  }
  std::erase_if(m.atoms_, [](const Atom& a) { return a.second == 0.0; });
  double sum = 0.0, carry = 0.0;
  for (const auto& a : m.atoms_) {
    const double t = sum + a.second;
    carry += std::abs(sum) >= a.second ? (sum - t) + a.second : (a.second - t) + sum;
    sum = t;
  }
  m.total_mass_ = sum + carry;
  return m;
}

Measure Measure::dirac(GroupDescriptor group, Element at, double mass) {
  return from_atoms(group, {{std::move(at), mass}});
}

Measure Measure::uniform(GroupDescriptor group, const std::vector<Element>& support,
                         double total_mass) {
  std::vector<Atom> atoms;
  const ElementSet s = make_set(support);
  if (s.empty()) return Measure(group);
  const double w = total_mass / static_cast<double>(s.size());
  for (const auto& g : s) atoms.emplace_back(g, w);
  return from_atoms(group, std::move(atoms));
}

Measure Measure::from_density(GroupDescriptor group, const std::vector<Element>& cells,
                              const std::vector<double>& density) {
  if (cells.size() != density.size()) {
    throw Error(ErrorCode::Precondition, "density and cell lists differ in length");
  }
  std::vector<Atom> atoms;
  atoms.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    atoms.emplace_back(cells[i], density[i] * group.cell_weight());
  }
  return from_atoms(group, std::move(atoms));
}

Measure Measure::uniform_interval(GroupDescriptor group, double lo, double hi, bool half_open) {
  if (group.kind() != GroupKind::RealGrid || group.dimension() != 1) {
    throw Error(ErrorCode::UnsupportedKind, "uniform_interval needs a 1-d real grid");
  }
  if (!(hi > lo)) throw Error(ErrorCode::Precondition, "empty interval");
  const double q = static_cast<double>(group.resolution());
  const auto first = static_cast<std::int64_t>(std::ceil(lo * q - 1e-9));
  auto last = static_cast<std::int64_t>(std::floor(hi * q + 1e-9));
  if (half_open && std::abs(static_cast<double>(last) - hi * q) < 1e-9) --last;
  std::vector<Element> cells;
  for (auto j = first; j <= last; ++j) cells.push_back({j});
  return uniform(group, cells, 1.0);
}

double Measure::at(const Element& g) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), Atom{g, 0.0}, element_less);
  return (it != atoms_.end() && it->first == g) ? it->second : 0.0;
}

ElementSet Measure::support() const {
  ElementSet s;
  s.reserve(atoms_.size());
  for (const auto& a : atoms_) s.push_back(a.first);
  return s;
}

Measure convolve(const Measure& a, const Measure& b, std::size_t cap) {
  require_same_group(a, b);
  const auto& g = a.group();
  std::unordered_map<Element, double, ElementHash> acc;
  acc.reserve(std::min<std::size_t>(cap, a.support_size() * b.support_size()));
  for (const auto& [x, wx] : a.atoms()) {
    for (const auto& [y, wy] : b.atoms()) {
      acc[g.multiply(x, y)] += wx * wy;
      if (acc.size() > cap) {
        throw Error(ErrorCode::Resource, "convolution support exceeds the cap of " +
                                             std::to_string(cap) + " atoms");
      }
    }
  }
  std::vector<Measure::Atom> atoms(acc.begin(), acc.end());
  return Measure::from_atoms(g, std::move(atoms));
}

Measure involute(const Measure& a) {
  std::vector<Measure::Atom> atoms;
  atoms.reserve(a.support_size());
  for (const auto& [x, w] : a.atoms()) {
    atoms.emplace_back(a.group().inverse(x), w * a.group().modular_function(x));
  }
  return Measure::from_atoms(a.group(), std::move(atoms));
}

Measure symmetrize(const Measure& a, std::size_t cap) { return convolve(a, involute(a), cap); }

Measure convolution_power(const Measure& a, int n, std::size_t cap) {
  if (n < 0) throw Error(ErrorCode::Precondition, "negative convolution power");
  Measure out = Measure::dirac(a.group(), a.group().identity());
  for (int i = 0; i < n; ++i) out = convolve(out, a, cap);
  return out;
}

double mass_on_set(const Measure& a, const ElementSet& set) {
  double s = 0.0;
  for (const auto& [x, w] : a.atoms()) {
    if (set_contains(set, x)) s += w;
  }
  return s;
}

Measure truncate(const Measure& a, double radius) {
  if (radius < 0) throw Error(ErrorCode::Precondition, "truncation radius must be >= 0");
  std::vector<Measure::Atom> atoms;
  for (const auto& atom : a.atoms()) {
    if (a.group().radius(atom.first) <= radius + 1e-12) atoms.push_back(atom);
  }
  return Measure::from_atoms(a.group(), std::move(atoms));
}

Measure regularize(const Measure& a, double epsilon, double radius) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::Precondition, "regularization epsilon must be > 0");
  std::vector<Measure::Atom> atoms(a.atoms().begin(), a.atoms().end());
  const double w = epsilon * a.group().cell_weight();
  for (auto& g : a.group().ball(radius)) atoms.emplace_back(std::move(g), w);
  return Measure::from_atoms(a.group(), std::move(atoms));
}

Measure scale(const Measure& a, double c) {
  if (c < 0) throw Error(ErrorCode::Precondition, "measures can only be scaled by c >= 0");
  std::vector<Measure::Atom> atoms(a.atoms().begin(), a.atoms().end());
  for (auto& atom : atoms) atom.second *= c;
  return Measure::from_atoms(a.group(), std::move(atoms));
}

bool approx_equal(const Measure& a, const Measure& b, double rel_tol) {
  if (!(a.group() == b.group())) return false;
  const double scale = std::max({a.total_mass(), b.total_mass(), 1e-300});
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& x = a.atoms();
  const auto& y = b.atoms();
  while (i < x.size() || j < y.size()) {
    double d = 0.0;
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      d = x[i++].second;
    } else if (i == x.size() || y[j].first < x[i].first) {
      d = y[j++].second;
    } else {
      d = x[i++].second - y[j++].second;
    }
    if (std::abs(d) > rel_tol * scale) return false;
  }
  return true;
}

bool is_symmetric(const Measure& a, double rel_tol) { return approx_equal(a, involute(a), rel_tol); }

std::string serialize(const Measure& a) {
  std::ostringstream os;
  os << "# dlab measure v1\n";
  os << "group " << a.group().describe() << "\n";
  os << "atoms " << a.support_size() << "\n";
  char buf[64];
  for (const auto& [x, w] : a.atoms()) {
    std::snprintf(buf, sizeof buf, "%.17g", w);
    os << "atom " << format_element(x) << ' ' << buf << "\n";
  }
  return os.str();
}

GroupDescriptor parse_group_header(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::string word;
  std::string kind;
  is >> word >> kind;
  if (word != "group") throw Error(ErrorCode::Schema, "expected 'group' header");
  long long dim = -1;
  long long resolution = -1;
  std::string kv;
  while (is >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Schema, "bad group parameter '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const long long value = std::stoll(kv.substr(eq + 1));
    if (key == "dim" || key == "rank") {
      dim = value;
    } else if (key == "resolution") {
      resolution = value;
    } else {
      throw Error(ErrorCode::Schema, "unknown group parameter '" + key + "'");
    }
  }
  if (dim < 0) throw Error(ErrorCode::Schema, "group header lacks dim/rank");
  const int d = static_cast<int>(dim);
  if (kind == "integer-lattice") return GroupDescriptor::integer_lattice(d);
  if (kind == "free-group") return GroupDescriptor::free_group(d);
  if (resolution < 0) throw Error(ErrorCode::Schema, "grid group header lacks resolution");
  if (kind == "real-grid") return GroupDescriptor::real_grid(d, resolution);
  if (kind == "torus-grid") return GroupDescriptor::torus_grid(d, resolution);
  throw Error(ErrorCode::Schema, "unknown group kind '" + kind + "'");
}

Measure parse_measure(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::optional<GroupDescriptor> group;
  std::vector<Measure::Atom> atoms;
  std::size_t declared = 0;
  bool have_count = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("group ", 0) == 0) {
      group = parse_group_header(line);
    } else if (line.rfind("atoms ", 0) == 0) {
      declared = std::stoull(line.substr(6));
      have_count = true;
    } else if (line.rfind("atom ", 0) == 0) {
      const auto open = line.find('(');
      const auto close = line.find(')');
      if (open == std::string::npos || close == std::string::npos || close < open) {
        throw Error(ErrorCode::Schema, "malformed atom line '" + line + "'");
      }
      Element e;
      std::string coords = line.substr(open + 1, close - open - 1);
      std::istringstream cs(coords);
      std::string tok;
      while (std::getline(cs, tok, ',')) {
        if (!tok.empty()) e.push_back(std::stoll(tok));
      }
      atoms.emplace_back(std::move(e), std::stod(line.substr(close + 1)));
    } else {
      throw Error(ErrorCode::Schema, "unrecognized line '" + line + "'");
    }
  }
  if (!group) throw Error(ErrorCode::Schema, "measure text lacks a group header");
  if (have_count && declared != atoms.size()) {
    throw Error(ErrorCode::Schema, "atom count mismatch: declared " + std::to_string(declared) +
                                       ", found " + std::to_string(atoms.size()));
  }
  return Measure::from_atoms(*group, std::move(atoms));
}

}  // namespace dlab
