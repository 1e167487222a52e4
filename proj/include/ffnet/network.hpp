#pragma once

#include "ffnet/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace ffnet {

/// Dense row-major 0/1 matrix.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols);
    BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows);

    static BinaryMatrix identity(std::size_t n);
    /// Builds from nested rows; throws StructuralError on ragged input or entries outside {0,1}.
    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool value) { data_[i * cols_ + j] = value ? 1 : 0; }

    std::vector<int> row(std::size_t i) const;
    std::vector<std::vector<int>> to_rows() const;
    std::size_t count() const;

    /// Boolean product: (this * other)(i,j) = OR_k this(i,k) AND other(k,j).
    BinaryMatrix boolean_product(const BinaryMatrix& other) const;

    friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Inverse measurement variances of the first layer. Every entry is strictly positive.
class PrecisionVector {
public:
    PrecisionVector() = default;
    explicit PrecisionVector(RationalVector values);

    static PrecisionVector ones(std::size_t n);
    /// Converts variances sigma_i^2 to precisions 1/sigma_i^2 exactly.
    static PrecisionVector from_variances(const RationalVector& variances);

    std::size_t size() const { return values_.size(); }
    const Rational& operator[](std::size_t i) const { return values_[i]; }
    const RationalVector& values() const { return values_; }
    Rational total() const { return sum(values_); }

    friend bool operator==(const PrecisionVector&, const PrecisionVector&) = default;

private:
    RationalVector values_;
};

/// A strictly layered feedforward network.
///
/// Layers and agents are 0-indexed here; files and reports use 1-based labels.
/// Connectivity matrix k has shape layer_size(k+1) x layer_size(k) and entry
/// (i, j) set when agent j of layer k sends its estimate to agent i of layer k+1.
/// The single aggregating agent that listens to the whole last layer is implicit.
class LayeredNetwork {
public:
    LayeredNetwork() = default;
    /// Throws StructuralError naming the offending matrix when shapes do not fit.
    LayeredNetwork(std::vector<std::size_t> layer_sizes, std::vector<BinaryMatrix> connectivity);

    std::size_t layer_count() const { return layer_sizes_.size(); }
    std::size_t layer_size(std::size_t layer) const { return layer_sizes_.at(layer); }
    const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
    std::size_t first_layer_size() const { return layer_sizes_.front(); }
    const std::vector<BinaryMatrix>& connectivity() const { return connectivity_; }
    /// Matrix feeding layer `layer + 1` from `layer`.
    const BinaryMatrix& connectivity(std::size_t layer) const { return connectivity_.at(layer); }
    std::size_t edge_count() const;

    friend bool operator==(const LayeredNetwork&, const LayeredNetwork&) = default;

private:
    std::vector<std::size_t> layer_sizes_;
    std::vector<BinaryMatrix> connectivity_;
};

struct AgentRef {
    std::size_t layer;
    std::size_t index;
    friend bool operator==(const AgentRef&, const AgentRef&) = default;
};

struct ValidationReport {
    std::vector<AgentRef> zero_in_degree;
    std::vector<AgentRef> zero_out_degree;

    bool ok() const { return zero_in_degree.empty() && zero_out_degree.empty(); }
    std::vector<AgentRef> isolated_agents() const;
};

ValidationReport validate(const LayeredNetwork& net);

/// Reachability from `from_layer` to `to_layer` (shape to x from), the boolean
/// product of the intervening connectivity matrices.
BinaryMatrix path_matrix(const LayeredNetwork& net, std::size_t from_layer, std::size_t to_layer);

std::vector<std::size_t> out_degrees(const LayeredNetwork& net, std::size_t layer);
std::vector<std::size_t> in_degrees(const LayeredNetwork& net, std::size_t layer);
/// Agents of layer `layer - 1` that send to `agent` of `layer`.
std::vector<std::size_t> input_set(const LayeredNetwork& net, std::size_t layer, std::size_t agent);

struct NetworkFile {
    LayeredNetwork network;
    PrecisionVector precisions;
    friend bool operator==(const NetworkFile&, const NetworkFile&) = default;
};

/// JSON network file: {"layers", "connectivity", optional "precisions" or "variances"}.
NetworkFile parse_network(const std::string& text, const std::string& origin = "<string>");
std::string serialize_network(const LayeredNetwork& net, const PrecisionVector& precisions);

NetworkFile load(const std::filesystem::path& path);
void save(const LayeredNetwork& net, const PrecisionVector& precisions, const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace ffnet
