// Free words and noncommutative polynomials in d letters, evaluated on
// matrix tuples.

#ifndef NCPICK_WORD_HPP
#define NCPICK_WORD_HPP

#include <map>
#include <vector>

#include "ncpick/types.hpp"

namespace ncpick {

/// A word in letters 1..d; the empty vector is the empty word.
using Word = std::vector<int>;

inline Matrix evalWord(const Word& w, const RowTuple& x) {
    Matrix acc = identity(x.n);
    for (int letter : w) {
        if (letter < 1 || letter > x.d)
            throw DimensionMismatch("evalWord: letter out of range 1..d");
        acc = acc * x.mats[size_t(letter) - 1];
    }
    return acc;
}

/// All words of length <= maxLen in length-then-lexicographic order.
inline std::vector<Word> wordsUpTo(int d, int maxLen) {
    if (d < 1 || maxLen < 0) throw DimensionMismatch("wordsUpTo: bad arguments");
    std::vector<Word> out;
    out.push_back({});
    size_t levelBegin = 0;
    for (int len = 1; len <= maxLen; ++len) {
        size_t levelEnd = out.size();
        for (size_t k = levelBegin; k < levelEnd; ++k)
            for (int letter = 1; letter <= d; ++letter) {
                Word w = out[k];
                w.push_back(letter);
                out.push_back(std::move(w));
            }
        levelBegin = levelEnd;
    }
    return out;
}

/// A noncommutative polynomial: a finite coefficient map over words.
/// Zero coefficients are never stored.
struct NcPoly {
    int letterCount = 1;
    std::map<Word, Complex> terms;

    NcPoly() = default;
    explicit NcPoly(int d) : letterCount(d) {}

    static NcPoly constant(int d, Complex c) {
        NcPoly p(d);
        p.add({}, c);
        return p;
    }
    static NcPoly letter(int d, int i) {
        NcPoly p(d);
        p.add({i}, 1.0);
        return p;
    }

    void add(const Word& w, Complex c) {
        for (int letter : w)
            if (letter < 1 || letter > letterCount)
                throw DimensionMismatch("NcPoly: letter out of range");
        auto it = terms.find(w);
        Complex v = (it == terms.end() ? Complex(0) : it->second) + c;
        if (v == Complex(0)) {
            if (it != terms.end()) terms.erase(it);
        } else {
            terms[w] = v;
        }
    }

    NcPoly operator+(const NcPoly& o) const {
        NcPoly p(letterCount);
        p.terms = terms;
        for (const auto& [w, c] : o.terms) p.add(w, c);
        return p;
    }

    NcPoly operator*(const NcPoly& o) const {
        NcPoly p(letterCount);
        for (const auto& [u, cu] : terms)
            for (const auto& [v, cv] : o.terms) {
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                p.add(w, cu * cv);
            }
        return p;
    }
};

inline Matrix evalPoly(const NcPoly& p, const RowTuple& x) {
    Matrix acc = Matrix::Zero(x.n, x.n);
    for (const auto& [w, c] : p.terms) acc += c * evalWord(w, x);
    return acc;
}

/// Depth-first accumulation of f(X^w) over all words |w| <= maxLen, with
/// prefix reuse so each word costs one matrix multiplication.
template <typename F>
void forEachWordProduct(const RowTuple& x, int maxLen, F&& visit) {
    Matrix cur = identity(x.n);
    auto rec = [&](auto&& self, const Matrix& prefix, int depth) -> void {
        visit(prefix);
        if (depth == maxLen) return;
        for (int i = 0; i < x.d; ++i)
            self(self, Matrix(prefix * x.mats[size_t(i)]), depth + 1);
    };
    rec(rec, cur, 0);
}

}  // namespace ncpick

#endif
