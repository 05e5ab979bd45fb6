#include "dlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "dlab/error.hpp"

namespace dlab {

const char* to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::IntegerLattice: return "integer-lattice";
    case GroupKind::FreeGroup: return "free-group";
    case GroupKind::RealGrid: return "real-grid";
    case GroupKind::TorusGrid: return "torus-grid";
  }
  return "unknown";
}

GroupDescriptor GroupDescriptor::integer_lattice(int dim) {
  if (dim < 1) throw Error(ErrorCode::Precondition, "lattice dimension must be >= 1");
  return GroupDescriptor(GroupKind::IntegerLattice, dim, 1);
}

GroupDescriptor GroupDescriptor::free_group(int rank) {
  if (rank < 1) throw Error(ErrorCode::Precondition, "free group rank must be >= 1");
  return GroupDescriptor(GroupKind::FreeGroup, rank, 1);
}

GroupDescriptor GroupDescriptor::real_grid(int dim, std::int64_t resolution) {
  if (dim < 1 || resolution < 1) {
    throw Error(ErrorCode::Precondition, "real grid needs dim >= 1 and resolution >= 1");
  }
  return GroupDescriptor(GroupKind::RealGrid, dim, resolution);
}

GroupDescriptor GroupDescriptor::torus_grid(int dim, std::int64_t resolution) {
  if (dim < 1 || resolution < 1) {
    throw Error(ErrorCode::Precondition, "torus grid needs dim >= 1 and resolution >= 1");
  }
  return GroupDescriptor(GroupKind::TorusGrid, dim, resolution);
}

Element GroupDescriptor::identity() const {
  if (kind_ == GroupKind::FreeGroup) return {};
  return Element(static_cast<std::size_t>(dim_), 0);
}

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

Element GroupDescriptor::multiply(const Element& a, const Element& b) const {
  if (kind_ == GroupKind::FreeGroup) {
    Element out = a;
    for (auto letter : b) {
      if (!out.empty() && out.back() == -letter) {
        out.pop_back();
      } else {
        out.push_back(letter);
      }
    }
    return out;
  }
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] + b[i];
    if (kind_ == GroupKind::TorusGrid) out[i] = mod(out[i], resolution_);
  }
  return out;
}

Element GroupDescriptor::inverse(const Element& a) const {
  if (kind_ == GroupKind::FreeGroup) {
    Element out(a.rbegin(), a.rend());
    for (auto& letter : out) letter = -letter;
    return out;
  }
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = kind_ == GroupKind::TorusGrid ? mod(-a[i], resolution_) : -a[i];
  }
  return out;
}

bool GroupDescriptor::is_identity(const Element& a) const {
  if (kind_ == GroupKind::FreeGroup) return a.empty();
  return std::all_of(a.begin(), a.end(), [](auto c) { return c == 0; });
}

void GroupDescriptor::validate(const Element& a) const {
  if (kind_ == GroupKind::FreeGroup) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0 || std::abs(a[i]) > dim_) {
        throw Error(ErrorCode::Precondition, "invalid free-group letter in " + format_element(a));
      }
      if (i > 0 && a[i] == -a[i - 1]) {
        throw Error(ErrorCode::Precondition, "word is not reduced: " + format_element(a));
      }
    }
    return;
  }
  if (a.size() != static_cast<std::size_t>(dim_)) {
    throw Error(ErrorCode::Precondition,
                "element " + format_element(a) + " has wrong dimension for " + describe());
  }
  if (kind_ == GroupKind::TorusGrid) {
    for (auto c : a) {
      if (c < 0 || c >= resolution_) {
        throw Error(ErrorCode::Precondition, "torus coordinate out of range in " + format_element(a));
      }
    }
  }
}

double GroupDescriptor::cell_weight() const noexcept {
  switch (kind_) {
    case GroupKind::IntegerLattice:
    case GroupKind::FreeGroup:
      return 1.0;
    case GroupKind::RealGrid:
    case GroupKind::TorusGrid:
      return std::pow(static_cast<double>(resolution_), -dim_);
  }
  return 1.0;
}

std::vector<double> GroupDescriptor::real_coordinates(const Element& a) const {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (kind_) {
      case GroupKind::IntegerLattice:
      case GroupKind::FreeGroup:
        out[i] = static_cast<double>(a[i]);
        break;
      case GroupKind::RealGrid:
        out[i] = static_cast<double>(a[i]) / static_cast<double>(resolution_);
        break;
      case GroupKind::TorusGrid: {
        // centered representative in [-1/2, 1/2)
        std::int64_t c = a[i] >= (resolution_ + 1) / 2 ? a[i] - resolution_ : a[i];
        out[i] = static_cast<double>(c) / static_cast<double>(resolution_);
        break;
      }
    }
  }
  return out;
}

double GroupDescriptor::radius(const Element& a) const {
  if (kind_ == GroupKind::FreeGroup) return static_cast<double>(a.size());
  double s = 0.0;
  for (double x : real_coordinates(a)) s += x * x;
  return std::sqrt(s);
}

std::vector<Element> GroupDescriptor::ball(double r) const {
  if (r < 0) return {};
  std::vector<Element> out;
  const double slack = 1e-12;
  if (kind_ == GroupKind::FreeGroup) {
    auto len = static_cast<std::size_t>(std::floor(r + slack));
    std::vector<Element> frontier{identity()};
    out.push_back(identity());
    for (std::size_t l = 0; l < len; ++l) {
      std::vector<Element> next;
      for (const auto& w : frontier) {
        for (std::int64_t letter = -dim_; letter <= dim_; ++letter) {
          if (letter == 0 || (!w.empty() && w.back() == -letter)) continue;
          Element v = w;
          v.push_back(letter);
          next.push_back(std::move(v));
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::int64_t lo = 0;
  std::int64_t hi = 0;
  if (kind_ == GroupKind::TorusGrid) {
    lo = 0;
    hi = resolution_ - 1;
  } else {
    const double scale = kind_ == GroupKind::RealGrid ? static_cast<double>(resolution_) : 1.0;
    hi = static_cast<std::int64_t>(std::floor(r * scale + slack));
    lo = -hi;
  }
  Element cur(static_cast<std::size_t>(dim_), lo);
  while (true) {
    if (radius(cur) <= r + slack) out.push_back(cur);
    int i = dim_ - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == hi) {
      cur[static_cast<std::size_t>(i)] = lo;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<Element> GroupDescriptor::standard_generators() const {
  std::vector<Element> out;
  if (kind_ == GroupKind::FreeGroup) {
    for (std::int64_t i = 1; i <= dim_; ++i) {
      out.push_back({i});
      out.push_back({-i});
    }
  } else {
    for (int i = 0; i < dim_; ++i) {
      Element up = identity();
      up[static_cast<std::size_t>(i)] = 1;
      out.push_back(up);
      out.push_back(inverse(up));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string GroupDescriptor::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == GroupKind::FreeGroup) {
    os << " rank=" << dim_;
  } else {
    os << " dim=" << dim_;
  }
  if (kind_ == GroupKind::RealGrid || kind_ == GroupKind::TorusGrid) {
    os << " resolution=" << resolution_;
  }
  return os.str();
}

std::string format_element(const Element& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e[i]);
  }
  return s + ")";
}

ElementSet make_set(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

bool set_contains(const ElementSet& set, const Element& e) {
  return std::binary_search(set.begin(), set.end(), e);
}

ElementSet set_product(const GroupDescriptor& g, const ElementSet& a, const ElementSet& b,
                       std::size_t cap) {
  std::unordered_set<Element, ElementHash> acc;
  for (const auto& x : a) {
    for (const auto& y : b) {
      acc.insert(g.multiply(x, y));
      if (acc.size() > cap) {
        throw Error(ErrorCode::Resource,
                    "set product exceeds the support cap of " + std::to_string(cap) + " elements");
      }
    }
  }
  return make_set(std::vector<Element>(acc.begin(), acc.end()));
}

ElementSet set_inverse(const GroupDescriptor& g, const ElementSet& a) {
  std::vector<Element> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(g.inverse(x));
  return make_set(std::move(out));
}

ElementSet set_power(const GroupDescriptor& g, const ElementSet& a, int n, std::size_t cap) {
  ElementSet out{g.identity()};
  for (int i = 0; i < n; ++i) out = set_product(g, out, a, cap);
  return out;
}

bool is_symmetric(const GroupDescriptor& g, const ElementSet& a) {
  return set_inverse(g, a) == make_set(a);
}

}  // namespace dlab
