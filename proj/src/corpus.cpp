#include "clustercert/corpus.hpp"

#include <cmath>
#include <stdexcept>

namespace clustercert {

namespace {

// First entries from the list, repeating the last one for higher dimensions,
// so every family stays well defined for any N.
std::vector<double> per_axis(std::initializer_list<double> head, int dim) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(dim));
    double last = 0.0;
    for (double x : head) {
        last = x;
        if (static_cast<int>(v.size()) < dim) v.push_back(x);
    }
    while (static_cast<int>(v.size()) < dim) v.push_back(last);
    return v;
}

}  // namespace

std::vector<CorpusEntry> builtin_corpus(int dim) {
    if (dim < 1) throw std::invalid_argument("builtin_corpus: dim must be >= 1");
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dim));

    std::vector<CorpusEntry> corpus;
    corpus.push_back({"constant-one", FunctionSpec(ConstantFn{1.0}), true, 0.4});
    corpus.push_back({"linear-tilt",
                      FunctionSpec(LinearFn{per_axis({1.0, 0.3, 0.2}, dim)}), true,
                      0.15});
    corpus.push_back({"bump-centered",
                      FunctionSpec(BumpFn{per_axis({0.0}, dim), 0.25, 1.0}), true,
                      0.25});
    corpus.push_back({"bump-offset",
                      FunctionSpec(BumpFn{per_axis({0.2, -0.1, 0.1}, dim), 0.3, 1.0}),
                      true, 0.25});
    corpus.push_back({"bump-wide",
                      FunctionSpec(BumpFn{per_axis({0.0}, dim), 0.5, 1.0}), true,
                      0.3});
    corpus.push_back({"bump-narrow",
                      FunctionSpec(BumpFn{per_axis({-0.15, 0.22, -0.08}, dim), 0.18,
                                          1.2}),
                      true, 0.3});
    corpus.push_back({"tanh-front",
                      FunctionSpec(TanhPlateauFn{per_axis({1.0, 0.0}, dim), 0.0, 6.0,
                                                 1.0}),
                      true, 0.4});
    corpus.push_back({"tanh-diagonal",
                      FunctionSpec(TanhPlateauFn{
                          std::vector<double>(static_cast<std::size_t>(dim), inv_sqrt),
                          0.1, 4.0, 1.0}),
                      true, 0.35});
    corpus.push_back({"trig-a", FunctionSpec(RandomTrigFn{101, 4, 1.0}), true, 0.2});
    corpus.push_back({"trig-b", FunctionSpec(RandomTrigFn{202, 5, 0.8}), true, 0.15});
    corpus.push_back({"trig-c", FunctionSpec(RandomTrigFn{303, 3, 1.2}), true, 0.25});
    corpus.push_back({"halfspace-step",
                      FunctionSpec(IndicatorHalfspaceFn{0, 0.0, 0.0, 1.0}), false,
                      0.5});
    corpus.push_back({"halfspace-shifted",
                      FunctionSpec(IndicatorHalfspaceFn{dim - 1, -0.1, 0.2, 1.4}),
                      false, 0.6});
    return corpus;
}

std::vector<CorpusEntry> smooth_corpus(int dim) {
    std::vector<CorpusEntry> out;
    for (CorpusEntry& e : builtin_corpus(dim))
        if (e.smooth) out.push_back(std::move(e));
    return out;
}

std::vector<CorpusEntry> bv_corpus(int dim) {
    std::vector<CorpusEntry> out;
    for (CorpusEntry& e : builtin_corpus(dim))
        if (!e.smooth) out.push_back(std::move(e));
    return out;
}

}  // namespace clustercert
