#pragma once

#include <string>
#include <vector>

#include "clustercert/geometry.hpp"

namespace clustercert {

/// Named built-in test function. `smooth` marks members usable for gradient
/// embedding sweeps; the rest are discontinuous, BV-only. `level` is a level
/// c at which the function carries a nontrivial superlevel set on Q_1(0).
struct CorpusEntry {
    std::string name;
    FunctionSpec spec;
    bool smooth = true;
    double level = 0.5;
};

/// Fixed corpus exercising every family regime for the given dimension:
/// constant and linear (Lipschitz), bumps and trigonometric samples (smooth),
/// a tanh plateau (steep but smooth), and a half-space indicator (BV-only).
std::vector<CorpusEntry> builtin_corpus(int dim);

/// Smooth subset of builtin_corpus.
std::vector<CorpusEntry> smooth_corpus(int dim);

/// BV-only subset of builtin_corpus.
std::vector<CorpusEntry> bv_corpus(int dim);

}  // namespace clustercert
