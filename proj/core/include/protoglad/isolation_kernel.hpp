#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "protoglad/graph.hpp"

namespace protoglad {

// Isolation Kernel model: t random partitionings of the pooled node-vector
// space. Each partitioning holds psi sample points (centers); the cell of a
// center is the hypersphere around it whose radius is the distance to its
// nearest other center in the same partitioning. A point belongs to the
// nearest center whose hypersphere covers it, or to no cell at all.
//
// The induced kernel k(x, y) is the fraction of partitionings in which x and
// y share a cell, which equals (1/t) <phi(x), phi(y)> for the sparse binary
// feature map phi computed by ik_map().
struct IkModel {
    int t = 0;
    int psi = 0;
    int attr_dim = 0;
    std::uint64_t seed = 0;

    // centers[(p * psi + c) * attr_dim + j]; radii[p * psi + c]
    std::vector<double> centers;
    std::vector<double> radii;

    std::span<const double> center(int partitioning, int idx) const {
        return {centers.data() +
                    (static_cast<std::size_t>(partitioning) * psi + idx) * attr_dim,
                static_cast<std::size_t>(attr_dim)};
    }
    double radius(int partitioning, int idx) const {
        return radii[static_cast<std::size_t>(partitioning) * psi + idx];
    }

    std::size_t feature_dim() const {
        return static_cast<std::size_t>(t) * static_cast<std::size_t>(psi);
    }
};

// One feature vector in sparse form: codes[p] is the in-block offset of the
// single 1 in block p, or kNoCell when the point escapes every hypersphere
// of partitioning p.
inline constexpr std::int32_t kNoCell = -1;
using SparseCodes = std::vector<std::int32_t>;

// Fits t partitionings on the pooled rows, each from an independent size-psi
// subsample drawn uniformly without replacement. Deterministic in seed.
// Throws DataError if psi < 2 or fewer than psi rows are available.
IkModel fit_ik(const Matrix& node_vectors, int psi, int t, std::uint64_t seed);

// Maps an attr_dim-dimensional point to its sparse feature codes. Per
// partitioning the point is assigned to the nearest covering center
// (distance <= radius, squared-distance comparison, ties broken by lowest
// center index).
SparseCodes ik_map(const IkModel& model, std::span<const double> x);

// k(x, y) = (1/t) <phi(x), phi(y)> in [0, 1].
double ik_kernel(const IkModel& model, std::span<const double> x,
                 std::span<const double> y);

double ik_kernel_codes(const IkModel& model, const SparseCodes& a,
                       const SparseCodes& b);

// Stacks every graph's attribute rows into one matrix (the set D the kernel
// is fitted on).
Matrix pool_node_vectors(const GraphDataset& ds);

// JSON (de)serialization so a fitted model can be reused across CLI runs.
std::string ik_model_to_json(const IkModel& model);
IkModel ik_model_from_json(const std::string& text);
void save_ik_model(const IkModel& model, const std::string& path);
IkModel load_ik_model(const std::string& path);

} // namespace protoglad
