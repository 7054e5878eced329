#pragma once

// Finite product spaces and partitions. On a finite set every σ-field is
// generated by a unique partition, so partitions are the only representation
// of information fields used in this library.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gpf {

enum class FactorKind { NatureExogenous, NatureType, Action };

const char* to_string(FactorKind kind);

struct FiniteFactor {
  std::string id;
  std::string label;
  std::vector<std::string> elements;
  FactorKind kind = FactorKind::Action;

  std::size_t size() const { return elements.size(); }
  bool is_nature() const { return kind != FactorKind::Action; }
  friend bool operator==(const FiniteFactor&, const FiniteFactor&) = default;
};

using Point = std::vector<std::size_t>;

/// Cartesian product of finite factors. Points are enumerated row-major in
/// declared factor order: the last factor varies fastest.
class ProductSpace {
 public:
  /// Largest number of points a space may hold.
  static constexpr std::size_t kMaxPoints = std::size_t{1} << 28;

  explicit ProductSpace(std::vector<FiniteFactor> factors);

  const std::vector<FiniteFactor>& factors() const { return factors_; }
  const FiniteFactor& factor(std::size_t i) const { return factors_[i]; }
  std::size_t factor_count() const { return factors_.size(); }
  std::size_t size() const { return size_; }

  std::optional<std::size_t> factor_index(const std::string& id) const;
  std::size_t stride(std::size_t factor) const { return strides_[factor]; }

  /// Element index of `factor` at point `index`.
  std::size_t coordinate(std::size_t index, std::size_t factor) const {
    return (index / strides_[factor]) % factors_[factor].size();
  }
  /// Same point with `factor` moved to `element`.
  std::size_t with_coordinate(std::size_t index, std::size_t factor,
                              std::size_t element) const {
    return index - coordinate(index, factor) * strides_[factor] +
           element * strides_[factor];
  }

  Point point(std::size_t index) const;
  std::size_t index_of(std::span<const std::size_t> point) const;
  std::string describe(std::size_t index) const;

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<FiniteFactor> factors_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

ProductSpace make_product_space(std::vector<FiniteFactor> factors);

/// A total labeling of the points of a space by atom ids. Atom ids are
/// canonical: they are numbered by first occurrence in point enumeration, so
/// two partitions with the same blocks compare equal.
class Partition {
 public:
  /// Builds from arbitrary labels (one per point); labels are canonicalized.
  Partition(std::shared_ptr<const ProductSpace> space,
            std::span<const std::size_t> labels);

  static Partition trivial(std::shared_ptr<const ProductSpace> space);
  static Partition discrete(std::shared_ptr<const ProductSpace> space);

  const ProductSpace& space() const { return *space_; }
  const std::shared_ptr<const ProductSpace>& space_ptr() const { return space_; }
  std::size_t atom(std::size_t point) const { return atom_of_[point]; }
  std::size_t atom_count() const { return atom_count_; }
  const std::vector<std::uint32_t>& labels() const { return atom_of_; }
  /// Smallest point of each atom, indexed by atom id.
  std::vector<std::size_t> representatives() const;
  std::vector<std::vector<std::size_t>> atoms() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return (a.space_ == b.space_ || *a.space_ == *b.space_) &&
           a.atom_of_ == b.atom_of_;
  }

 private:
  Partition() = default;
  std::shared_ptr<const ProductSpace> space_;
  std::vector<std::uint32_t> atom_of_;
  std::size_t atom_count_ = 0;
};

/// Points share an atom iff they agree on every visible factor.
Partition cylinder_partition(std::shared_ptr<const ProductSpace> space,
                             const std::vector<std::string>& visible);
Partition cylinder_partition_by_index(std::shared_ptr<const ProductSpace> space,
                                      const std::vector<std::size_t>& visible);

/// True iff every atom of `fine` lies inside a single atom of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

/// Meet of two partitions: the coarsest partition refining both.
Partition common_refinement(const Partition& p, const Partition& q);

/// True iff `values` (one per point) is constant on every atom of `wrt`.
template <class T>
bool is_measurable(std::span<const T> values, const Partition& wrt) {
  if (values.size() != wrt.space().size()) return false;
  std::vector<const T*> seen(wrt.atom_count(), nullptr);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const T*& rep = seen[wrt.atom(i)];
    if (rep == nullptr) {
      rep = &values[i];
    } else if (!(*rep == values[i])) {
      return false;
    }
  }
  return true;
}

template <class T>
bool is_measurable(const std::vector<T>& values, const Partition& wrt) {
  return is_measurable(std::span<const T>(values), wrt);
}

}  // namespace gpf
