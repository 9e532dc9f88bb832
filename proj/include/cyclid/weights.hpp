#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace cyclid {

// Coordinates closer than this are treated as equal when weight vectors are
// compared or deduplicated.
inline constexpr double kWeightQuantum = 1e-12;

/// A point on the unit simplex: non-negative coordinates summing to one.
///
/// The constructor clamps coordinates in [-1e-9, 0) to zero and rescales so
/// the sum is exactly one; anything further from the simplex is rejected.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> coords);

    int dimension() const { return static_cast<int>(coords_.size()); }
    double operator[](int h) const { return coords_[h]; }
    const std::vector<double>& coords() const { return coords_; }

    // Coordinates rounded to multiples of kWeightQuantum; the identity used
    // for set membership and caching.
    std::vector<std::int64_t> quantized() const;

    double distance_to(const WeightVector& other) const;

    bool operator==(const WeightVector& other) const;

private:
    std::vector<double> coords_;
};

/// Ordered collection of distinct weight vectors.
///
/// Distinctness is decided on quantized coordinates; insertion order is
/// preserved, and that order fixes the column order of every flow matrix
/// built from the set.
class WeightSet {
public:
    WeightSet() = default;

    // Returns the index of the weight (existing index if it was a duplicate).
    int insert(const WeightVector& w);

    bool contains(const WeightVector& w) const;
    // Index of w, or -1 if absent.
    int index_of(const WeightVector& w) const;

    int size() const { return static_cast<int>(items_.size()); }
    bool empty() const { return items_.empty(); }
    const WeightVector& operator[](int i) const { return items_[i]; }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<WeightVector> items_;
    std::map<std::vector<std::int64_t>, int> index_;
};

}  // namespace cyclid
