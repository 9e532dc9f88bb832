#include "cyclid/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cyclid {

WeightVector::WeightVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) {
        throw std::invalid_argument("weight vector must have at least one coordinate");
    }
    double sum = 0.0;
    for (double& c : coords_) {
        if (!(c >= -1e-9)) {
            throw std::invalid_argument("weight coordinate below zero: " + std::to_string(c));
        }
        if (c < 0.0) c = 0.0;
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("weight coordinates must sum to one, got " +
                                    std::to_string(sum));
    }
    if (sum != 1.0) {
        for (double& c : coords_) c /= sum;
    }
}

std::vector<std::int64_t> WeightVector::quantized() const {
    std::vector<std::int64_t> key(coords_.size());
    for (std::size_t h = 0; h < coords_.size(); ++h) {
        key[h] = std::llround(coords_[h] / kWeightQuantum);
    }
    return key;
}

double WeightVector::distance_to(const WeightVector& other) const {
    if (other.dimension() != dimension()) {
        throw std::invalid_argument("weight dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t h = 0; h < coords_.size(); ++h) {
        const double d = coords_[h] - other.coords_[h];
        s += d * d;
    }
    return std::sqrt(s);
}

bool WeightVector::operator==(const WeightVector& other) const {
    return dimension() == other.dimension() && quantized() == other.quantized();
}

int WeightSet::insert(const WeightVector& w) {
    auto key = w.quantized();
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const int pos = static_cast<int>(items_.size());
    items_.push_back(w);
    index_.emplace(std::move(key), pos);
    return pos;
}

bool WeightSet::contains(const WeightVector& w) const {
    return index_.count(w.quantized()) > 0;
}

int WeightSet::index_of(const WeightVector& w) const {
    auto it = index_.find(w.quantized());
    return it == index_.end() ? -1 : it->second;
}

}  // namespace cyclid
