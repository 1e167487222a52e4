#include "ffnet/network.hpp"

#include "ffnet/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <system_error>

namespace ffnet {

using nlohmann::json;

// ---------------------------------------------------------------- BinaryMatrix

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

BinaryMatrix::BinaryMatrix(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<std::vector<int>> nested;
    for (const auto& r : rows)
        nested.emplace_back(r);
    *this = from_rows(nested);
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
    BinaryMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BinaryMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw StructuralError("ragged matrix: row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j) {
            const int v = rows[i][j];
            if (v != 0 && v != 1)
                throw StructuralError("matrix entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") is " + std::to_string(v) +
                                      ", expected 0 or 1");
            m.set(i, j, v == 1);
        }
    }
    return m;
}

std::vector<int> BinaryMatrix::row(std::size_t i) const {
    std::vector<int> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j)
        out[j] = (*this)(i, j) ? 1 : 0;
    return out;
}

std::vector<std::vector<int>> BinaryMatrix::to_rows() const {
    std::vector<std::vector<int>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out.push_back(row(i));
    return out;
}

std::size_t BinaryMatrix::count() const {
    std::size_t n = 0;
    for (auto v : data_)
        n += v;
    return n;
}

BinaryMatrix BinaryMatrix::boolean_product(const BinaryMatrix& other) const {
    if (cols_ != other.rows_)
        throw StructuralError("boolean_product: inner dimensions differ");
    BinaryMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if ((*this)(i, k))
                for (std::size_t j = 0; j < other.cols_; ++j)
                    if (other(k, j))
                        out.set(i, j, true);
    return out;
}

// ------------------------------------------------------------- PrecisionVector

PrecisionVector::PrecisionVector(RationalVector values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (sgn(values_[i]) <= 0)
            throw ContractViolation("precision " + std::to_string(i + 1) + " is " +
                                    to_string(values_[i]) + ", must be positive");
}

PrecisionVector PrecisionVector::ones(std::size_t n) { return PrecisionVector(RationalVector(n, Rational(1))); }

PrecisionVector PrecisionVector::from_variances(const RationalVector& variances) {
    RationalVector w;
    w.reserve(variances.size());
    for (std::size_t i = 0; i < variances.size(); ++i) {
        if (sgn(variances[i]) <= 0)
            throw ContractViolation("variance " + std::to_string(i + 1) + " is " +
                                    to_string(variances[i]) + ", must be positive");
        w.push_back(1 / variances[i]);
    }
    return PrecisionVector(std::move(w));
}

// -------------------------------------------------------------- LayeredNetwork

LayeredNetwork::LayeredNetwork(std::vector<std::size_t> layer_sizes, std::vector<BinaryMatrix> connectivity)
    : layer_sizes_(std::move(layer_sizes)), connectivity_(std::move(connectivity)) {
    if (layer_sizes_.empty())
        throw StructuralError("network needs at least one layer");
    for (std::size_t k = 0; k < layer_sizes_.size(); ++k)
        if (layer_sizes_[k] == 0)
            throw StructuralError("layer " + std::to_string(k + 1) + " is empty");
    if (connectivity_.size() + 1 != layer_sizes_.size())
        throw StructuralError("expected " + std::to_string(layer_sizes_.size() - 1) +
                              " connectivity matrices, got " + std::to_string(connectivity_.size()));
    for (std::size_t k = 0; k < connectivity_.size(); ++k) {
        const auto& m = connectivity_[k];
        if (m.rows() != layer_sizes_[k + 1] || m.cols() != layer_sizes_[k])
            throw StructuralError("connectivity matrix " + std::to_string(k + 1) + " is " +
                                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                  std::to_string(layer_sizes_[k + 1]) + "x" + std::to_string(layer_sizes_[k]));
    }
}

std::size_t LayeredNetwork::edge_count() const {
    std::size_t n = 0;
    for (const auto& m : connectivity_)
        n += m.count();
    return n;
}

// ------------------------------------------------------------------ queries

std::vector<AgentRef> ValidationReport::isolated_agents() const {
    std::vector<AgentRef> out = zero_in_degree;
    out.insert(out.end(), zero_out_degree.begin(), zero_out_degree.end());
    return out;
}

ValidationReport validate(const LayeredNetwork& net) {
    ValidationReport report;
    for (std::size_t k = 1; k < net.layer_count(); ++k) {
        const auto deg = in_degrees(net, k);
        for (std::size_t i = 0; i < deg.size(); ++i)
            if (deg[i] == 0)
                report.zero_in_degree.push_back({k, i});
    }
    for (std::size_t k = 0; k + 1 < net.layer_count(); ++k) {
        const auto deg = out_degrees(net, k);
        for (std::size_t j = 0; j < deg.size(); ++j)
            if (deg[j] == 0)
                report.zero_out_degree.push_back({k, j});
    }
    return report;
}

BinaryMatrix path_matrix(const LayeredNetwork& net, std::size_t from_layer, std::size_t to_layer) {
    if (from_layer >= to_layer || to_layer >= net.layer_count())
        throw RangeError("path_matrix: need from_layer < to_layer < " + std::to_string(net.layer_count()) +
                         ", got " + std::to_string(from_layer) + " -> " + std::to_string(to_layer));
    BinaryMatrix reach = net.connectivity(from_layer);
    for (std::size_t k = from_layer + 1; k < to_layer; ++k)
        reach = net.connectivity(k).boolean_product(reach);
    return reach;
}

std::vector<std::size_t> out_degrees(const LayeredNetwork& net, std::size_t layer) {
    if (layer + 1 >= net.layer_count()) {
        if (layer >= net.layer_count())
            throw RangeError("out_degrees: layer " + std::to_string(layer) + " out of range");
        // The last explicit layer feeds only the implicit aggregator.
        return std::vector<std::size_t>(net.layer_size(layer), 1);
    }
    const auto& c = net.connectivity(layer);
    std::vector<std::size_t> deg(c.cols(), 0);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            deg[j] += c(i, j);
    return deg;
}

std::vector<std::size_t> in_degrees(const LayeredNetwork& net, std::size_t layer) {
    if (layer == 0 || layer >= net.layer_count())
        throw RangeError("in_degrees: layer " + std::to_string(layer) + " has no upstream matrix");
    const auto& c = net.connectivity(layer - 1);
    std::vector<std::size_t> deg(c.rows(), 0);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            deg[i] += c(i, j);
    return deg;
}

std::vector<std::size_t> input_set(const LayeredNetwork& net, std::size_t layer, std::size_t agent) {
    if (layer == 0 || layer >= net.layer_count())
        throw RangeError("input_set: layer " + std::to_string(layer) + " has no upstream matrix");
    const auto& c = net.connectivity(layer - 1);
    if (agent >= c.rows())
        throw RangeError("input_set: agent " + std::to_string(agent) + " out of range");
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < c.cols(); ++j)
        if (c(agent, j))
            out.push_back(j);
    return out;
}

// ---------------------------------------------------------------- file format

namespace {

RationalVector parse_rational_array(const json& node, const std::string& field, std::size_t expected) {
    if (!node.is_array())
        throw ParseError(field + ": expected an array");
    if (node.size() != expected)
        throw ParseError(field + ": expected " + std::to_string(expected) + " entries, got " +
                         std::to_string(node.size()));
    RationalVector out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const auto& v = node[i];
        const std::string where = field + "[" + std::to_string(i) + "]";
        if (v.is_number_integer())
            out.emplace_back(Integer(v.dump()));
        else if (v.is_string())
            try {
                out.push_back(parse_rational(v.get<std::string>()));
            } catch (const ParseError& e) {
                throw ParseError(where + ": " + e.what());
            }
        else
            throw ParseError(where + ": expected a rational string like \"3/2\" or an integer");
    }
    return out;
}

} // namespace

NetworkFile parse_network(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError(origin + ": top level must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (key != "layers" && key != "connectivity" && key != "precisions" && key != "variances")
            throw ParseError(origin + ": unknown key '" + key + "'");
    if (!doc.contains("layers"))
        throw ParseError(origin + ": missing 'layers'");
    if (!doc.contains("connectivity"))
        throw ParseError(origin + ": missing 'connectivity'");

    const auto& layers = doc["layers"];
    if (!layers.is_array() || layers.empty())
        throw ParseError(origin + ": 'layers' must be a non-empty array");
    std::vector<std::size_t> sizes;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        if (!layers[k].is_number_integer() || layers[k].get<long long>() < 1)
            throw ParseError(origin + ": layers[" + std::to_string(k) + "] must be a positive integer");
        sizes.push_back(layers[k].get<std::size_t>());
    }

    const auto& conn = doc["connectivity"];
    if (!conn.is_array())
        throw ParseError(origin + ": 'connectivity' must be an array");
    std::vector<BinaryMatrix> matrices;
    for (std::size_t k = 0; k < conn.size(); ++k) {
        const std::string field = origin + ": connectivity[" + std::to_string(k) + "]";
        const auto& m = conn[k];
        if (!m.is_array())
            throw ParseError(field + ": expected an array of rows");
        std::vector<std::vector<int>> rows;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i].is_array())
                throw ParseError(field + "[" + std::to_string(i) + "]: expected an array");
            std::vector<int> row;
            for (std::size_t j = 0; j < m[i].size(); ++j) {
                const auto& v = m[i][j];
                if (!v.is_number_integer() || (v.get<long long>() != 0 && v.get<long long>() != 1))
                    throw ParseError(field + "[" + std::to_string(i) + "][" + std::to_string(j) +
                                     "]: expected 0 or 1");
                row.push_back(v.get<int>());
            }
            rows.push_back(std::move(row));
        }
        try {
            matrices.push_back(BinaryMatrix::from_rows(rows));
        } catch (const StructuralError& e) {
            throw ParseError(field + ": " + e.what());
        }
        // An empty row list cannot carry its column count.
        if (rows.empty() && k < sizes.size())
            matrices.back() = BinaryMatrix(0, sizes[k]);
    }

    NetworkFile file;
    try {
        file.network = LayeredNetwork(std::move(sizes), std::move(matrices));
    } catch (const StructuralError& e) {
        throw ParseError(origin + ": " + e.what());
    }

    const std::size_t n = file.network.first_layer_size();
    if (doc.contains("precisions") && doc.contains("variances"))
        throw ParseError(origin + ": give either 'precisions' or 'variances', not both");
    try {
        if (doc.contains("precisions"))
            file.precisions = PrecisionVector(parse_rational_array(doc["precisions"], origin + ": precisions", n));
        else if (doc.contains("variances"))
            file.precisions =
                PrecisionVector::from_variances(parse_rational_array(doc["variances"], origin + ": variances", n));
        else
            file.precisions = PrecisionVector::ones(n);
    } catch (const ContractViolation& e) {
        throw ParseError(origin + ": " + e.what());
    }
    return file;
}

std::string serialize_network(const LayeredNetwork& net, const PrecisionVector& precisions) {
    if (precisions.size() != net.first_layer_size())
        throw StructuralError("precision vector length does not match the first layer");
    std::ostringstream out;
    out << "{\n  \"layers\": " << json(net.layer_sizes()).dump() << ",\n  \"connectivity\": [";
    for (std::size_t k = 0; k < net.connectivity().size(); ++k) {
        out << (k ? ",\n    [" : "\n    [");
        const auto& m = net.connectivity(k);
        for (std::size_t i = 0; i < m.rows(); ++i)
            out << (i ? ",\n      " : "\n      ") << json(m.row(i)).dump();
        out << "\n    ]";
    }
    out << (net.connectivity().empty() ? "]" : "\n  ]");
    out << ",\n  \"precisions\": " << json(to_strings(precisions.values())).dump() << "\n}\n";
    return out.str();
}

NetworkFile load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_network(buffer.str(), path.string());
}

void save(const LayeredNetwork& net, const PrecisionVector& precisions, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_network(net, precisions));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out)
            throw Error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into '" + path.string() + "'");
    }
}

} // namespace ffnet
