// JSON (de)serialization for the shared schemas: matrices as row-major
// [[re, im], ...] lists, row tuples, block targets, node specs and search
// configs. Integer literals are accepted wherever reals are expected.

#ifndef NCPICK_IO_HPP
#define NCPICK_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ncpick/search.hpp"
#include "ncpick/types.hpp"
#include "ncpick/zoo.hpp"

namespace ncpick {

using Json = nlohmann::json;

struct ParseError : Error {
    using Error::Error;
};

namespace io {

inline double asReal(const Json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
    return j.get<double>();
}

inline long asInt(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + ": expected an integer");
    return j.get<long>();
}

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline Json toJson(const Matrix& m) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrixFromJson(const Json& j) {
    long rows = asInt(field(j, "rows"), "matrix.rows");
    long cols = asInt(field(j, "cols"), "matrix.cols");
    if (rows < 0 || cols < 0) throw ParseError("matrix: negative dimensions");
    const Json& data = field(j, "data");
    if (!data.is_array() || long(data.size()) != rows * cols)
        throw ParseError("matrix: data length does not match rows*cols");
    Matrix m(rows, cols);
    long k = 0;
    for (const auto& e : data) {
        if (!e.is_array() || e.size() != 2)
            throw ParseError("matrix: entries must be [re, im] pairs");
        m(k / cols, k % cols) = Complex(asReal(e[0], "matrix entry"),
                                        asReal(e[1], "matrix entry"));
        ++k;
    }
    return m;
}

inline Json toJson(const RowTuple& x) {
    Json mats = Json::array();
    for (const auto& m : x.mats) mats.push_back(toJson(m));
    return Json{{"n", x.n}, {"d", x.d}, {"mats", std::move(mats)}};
}

inline RowTuple rowTupleFromJson(const Json& j) {
    long n = asInt(field(j, "n"), "tuple.n");
    long d = asInt(field(j, "d"), "tuple.d");
    const Json& mats = field(j, "mats");
    if (!mats.is_array() || long(mats.size()) != d)
        throw ParseError("tuple: mats length does not match d");
    std::vector<Matrix> ms;
    for (const auto& mj : mats) {
        Matrix m = matrixFromJson(mj);
        if (m.rows() != n || m.cols() != n)
            throw ParseError("tuple: matrix is not n x n");
        ms.push_back(std::move(m));
    }
    return RowTuple(int(n), std::move(ms));
}

inline Json toJson(const BlockTarget& y) {
    Json rows = Json::array();
    for (const auto& r : y.blocks) {
        Json row = Json::array();
        for (const auto& b : r) row.push_back(toJson(b));
        rows.push_back(std::move(row));
    }
    return Json{{"s", y.s}, {"t", y.t}, {"n", y.n}, {"blocks", std::move(rows)}};
}

inline BlockTarget blockTargetFromJson(const Json& j) {
    long s = asInt(field(j, "s"), "target.s");
    long t = asInt(field(j, "t"), "target.t");
    long n = asInt(field(j, "n"), "target.n");
    const Json& blocks = field(j, "blocks");
    if (!blocks.is_array() || long(blocks.size()) != s)
        throw ParseError("target: blocks row count does not match s");
    std::vector<std::vector<Matrix>> grid;
    for (const auto& rowj : blocks) {
        if (!rowj.is_array() || long(rowj.size()) != t)
            throw ParseError("target: blocks column count does not match t");
        std::vector<Matrix> row;
        for (const auto& bj : rowj) {
            Matrix b = matrixFromJson(bj);
            if (b.rows() != n || b.cols() != n)
                throw ParseError("target: block is not n x n");
            row.push_back(std::move(b));
        }
        grid.push_back(std::move(row));
    }
    return BlockTarget(int(s), int(t), int(n), std::move(grid));
}

/// Node spec: {"kind": ..., "n", "d", "weights", "epsilon", "seed"} with
/// the optional fields present only as their kind requires.
struct NodeSpec {
    std::string kind;
    int n = 0;
    int d = 0;
    std::vector<Complex> weights;
    std::vector<Matrix> unitaries;
    double epsilon = 0.0;
    uint64_t seed = 0;
};

inline NodeSpec nodeSpecFromJson(const Json& j) {
    NodeSpec s;
    s.kind = field(j, "kind").get<std::string>();
    s.n = int(asInt(field(j, "n"), "node.n"));
    if (j.contains("d")) s.d = int(asInt(j.at("d"), "node.d"));
    if (j.contains("epsilon")) s.epsilon = asReal(j.at("epsilon"), "node.epsilon");
    if (j.contains("seed")) s.seed = uint64_t(asInt(j.at("seed"), "node.seed"));
    if (j.contains("weights"))
        for (const auto& w : j.at("weights")) {
            if (!w.is_array() || w.size() != 2)
                throw ParseError("node.weights: entries must be [re, im] pairs");
            s.weights.emplace_back(asReal(w[0], "weight"), asReal(w[1], "weight"));
        }
    if (j.contains("unitaries"))
        for (const auto& u : j.at("unitaries")) s.unitaries.push_back(matrixFromJson(u));
    return s;
}

inline RowTuple resolveNode(const NodeSpec& s) {
    if (s.kind == "shift-dft") return shiftDft(s.n);
    if (s.kind == "choi-point") return choiPoint(s.n);
    if (s.kind == "random-normalized")
        return randomNormalized(s.n, s.d > 0 ? s.d : 2, s.epsilon, s.seed);
    if (s.kind == "weighted-unitaries") return weightedUnitaries(s.unitaries, s.weights);
    throw ParseError("unknown node kind '" + s.kind + "'");
}

inline SearchConfig searchConfigFromJson(const Json& j) {
    SearchConfig c;
    c.n = int(asInt(field(j, "n"), "search.n"));
    c.m = int(asInt(field(j, "m"), "search.m"));
    if (j.contains("d")) c.d = int(asInt(j.at("d"), "search.d"));
    c.gamma = asReal(field(j, "gamma"), "search.gamma");
    if (j.contains("epsilonMin")) c.epsilonMin = asReal(j.at("epsilonMin"), "search.epsilonMin");
    if (j.contains("epsilonMax")) c.epsilonMax = asReal(j.at("epsilonMax"), "search.epsilonMax");
    if (j.contains("fixedEpsilon")) c.fixedEpsilon = j.at("fixedEpsilon").get<bool>();
    if (j.contains("ablation")) c.ablation = j.at("ablation").get<bool>();
    if (j.contains("maxTrials")) c.maxTrials = asInt(j.at("maxTrials"), "search.maxTrials");
    if (j.contains("seed")) c.seed = uint64_t(asInt(j.at("seed"), "search.seed"));
    if (j.contains("jobs")) c.jobs = int(asInt(j.at("jobs"), "search.jobs"));
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    return c;
}

inline Json toJson(const SearchConfig& c) {
    return Json{{"n", c.n},
                {"m", c.m},
                {"d", c.d},
                {"gamma", c.gamma},
                {"epsilonMin", c.epsilonMin},
                {"epsilonMax", c.epsilonMax},
                {"fixedEpsilon", c.fixedEpsilon},
                {"ablation", c.ablation},
                {"maxTrials", c.maxTrials},
                {"seed", c.seed},
                {"jobs", c.jobs},
                {"timing", c.timing}};
}

}  // namespace io
}  // namespace ncpick

#endif
