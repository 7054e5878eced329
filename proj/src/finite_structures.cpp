#include "gpf/finite_structures.hpp"

#include <limits>
#include <set>
#include <unordered_map>

#include "gpf/errors.hpp"

namespace gpf {

const char* to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::NatureExogenous:
      return "exogenous";
    case FactorKind::NatureType:
      return "type";
    case FactorKind::Action:
      return "action";
  }
  return "?";
}

ProductSpace::ProductSpace(std::vector<FiniteFactor> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidArgument("product space needs at least one factor");
  std::set<std::string> ids;
  for (const auto& f : factors_) {
    if (f.elements.empty())
      throw InvalidArgument("factor '" + f.id + "' is empty");
    if (!ids.insert(f.id).second)
      throw InvalidArgument("duplicate factor id '" + f.id + "'");
    std::set<std::string> labels(f.elements.begin(), f.elements.end());
    if (labels.size() != f.elements.size())
      throw InvalidArgument("factor '" + f.id + "' has duplicate element labels");
    if (size_ > kMaxPoints / f.size())
      throw CapacityExceeded("product space size", std::numeric_limits<std::uint64_t>::max(),
                             kMaxPoints);
    size_ *= f.size();
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 1;)
    strides_[i - 1] = strides_[i] * factors_[i].size();
}

std::optional<std::size_t> ProductSpace::factor_index(const std::string& id) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].id == id) return i;
  return std::nullopt;
}

Point ProductSpace::point(std::size_t index) const {
  Point p(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) p[i] = coordinate(index, i);
  return p;
}

std::size_t ProductSpace::index_of(std::span<const std::size_t> point) const {
  if (point.size() != factors_.size())
    throw InvalidArgument("point has " + std::to_string(point.size()) +
                          " coordinates, space has " +
                          std::to_string(factors_.size()) + " factors");
  std::size_t index = 0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] >= factors_[i].size())
      throw InvalidArgument("coordinate " + std::to_string(point[i]) +
                            " out of range for factor '" + factors_[i].id + "'");
    index += point[i] * strides_[i];
  }
  return index;
}

std::string ProductSpace::describe(std::size_t index) const {
  std::string s = "(";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += ", ";
    s += factors_[i].id + "=" + factors_[i].elements[coordinate(index, i)];
  }
  return s + ")";
}

ProductSpace make_product_space(std::vector<FiniteFactor> factors) {
  return ProductSpace(std::move(factors));
}

Partition::Partition(std::shared_ptr<const ProductSpace> space,
                     std::span<const std::size_t> labels)
    : space_(std::move(space)) {
  if (!space_) throw InvalidArgument("partition needs a space");
  if (labels.size() != space_->size())
    throw InvalidArgument("partition labels cover " + std::to_string(labels.size()) +
                          " points, space has " + std::to_string(space_->size()));
  atom_of_.resize(labels.size());
  std::unordered_map<std::size_t, std::uint32_t> canon;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] =
        canon.try_emplace(labels[i], static_cast<std::uint32_t>(canon.size()));
    atom_of_[i] = it->second;
  }
  atom_count_ = canon.size();
}

Partition Partition::trivial(std::shared_ptr<const ProductSpace> space) {
  std::vector<std::size_t> labels(space->size(), 0);
  return Partition(std::move(space), labels);
}

Partition Partition::discrete(std::shared_ptr<const ProductSpace> space) {
  Partition p;
  p.atom_of_.resize(space->size());
  for (std::size_t i = 0; i < p.atom_of_.size(); ++i)
    p.atom_of_[i] = static_cast<std::uint32_t>(i);
  p.atom_count_ = space->size();
  p.space_ = std::move(space);
  return p;
}

std::vector<std::size_t> Partition::representatives() const {
  std::vector<std::size_t> reps(atom_count_);
  std::size_t next = 0;
  // Canonical ids appear in increasing order of first occurrence.
  for (std::size_t i = 0; i < atom_of_.size() && next < atom_count_; ++i)
    if (atom_of_[i] == next) reps[next++] = i;
  return reps;
}

std::vector<std::vector<std::size_t>> Partition::atoms() const {
  std::vector<std::vector<std::size_t>> out(atom_count_);
  for (std::size_t i = 0; i < atom_of_.size(); ++i) out[atom_of_[i]].push_back(i);
  return out;
}

Partition cylinder_partition_by_index(std::shared_ptr<const ProductSpace> space,
                                      const std::vector<std::size_t>& visible) {
  std::set<std::size_t> unique(visible.begin(), visible.end());
  for (std::size_t f : unique)
    if (f >= space->factor_count())
      throw InvalidArgument("factor index " + std::to_string(f) + " out of range");
  std::vector<std::size_t> labels(space->size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::size_t key = 0;
    for (std::size_t f : unique) key = key * space->factor(f).size() + space->coordinate(i, f);
    labels[i] = key;
  }
  return Partition(std::move(space), labels);
}

Partition cylinder_partition(std::shared_ptr<const ProductSpace> space,
                             const std::vector<std::string>& visible) {
  std::vector<std::size_t> indices;
  indices.reserve(visible.size());
  for (const auto& id : visible) {
    auto idx = space->factor_index(id);
    if (!idx) throw InvalidArgument("unknown factor id '" + id + "'");
    indices.push_back(*idx);
  }
  return cylinder_partition_by_index(std::move(space), indices);
}

namespace {

void require_same_space(const Partition& a, const Partition& b) {
  if (a.space_ptr() != b.space_ptr() && !(a.space() == b.space()))
    throw SpaceMismatch("partitions live on different product spaces");
}

}  // namespace

bool refines(const Partition& fine, const Partition& coarse) {
  require_same_space(fine, coarse);
  std::vector<std::int64_t> image(fine.atom_count(), -1);
  for (std::size_t i = 0; i < fine.space().size(); ++i) {
    auto& img = image[fine.atom(i)];
    auto c = static_cast<std::int64_t>(coarse.atom(i));
    if (img < 0) {
      img = c;
    } else if (img != c) {
      return false;
    }
  }
  return true;
}

Partition common_refinement(const Partition& p, const Partition& q) {
  require_same_space(p, q);
  std::vector<std::size_t> labels(p.space().size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = p.atom(i) * q.atom_count() + q.atom(i);
  return Partition(p.space_ptr(), labels);
}

}  // namespace gpf
