#include "clustercert/seminorms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "clustercert/numeric.hpp"

namespace clustercert {

FractionalParams::FractionalParams(double s_, double p_) : s(s_), p(p_) {
    if (!(std::isfinite(s) && s > 0.0 && s < 1.0))
        throw std::invalid_argument("FractionalParams: s must lie in (0,1)");
    if (!(std::isfinite(p) && p >= 1.0))
        throw std::invalid_argument("FractionalParams: p must be >= 1");
}

namespace {

// On a uniform grid the pair kernel depends only on the index offset, so the
// whole double sum collapses to one kernel evaluation per distinct offset
// instead of one per pair. Offsets are enumerated lexicographically positive
// (first nonzero component > 0), covering each unordered pair once.
struct PairPlan {
    int dim = 0;
    int cells = 0;                    // cells per axis of the evaluated grid
    std::vector<int> deltas;          // dim ints per offset
    std::vector<double> kernels;      // |delta|^-(N+ps) in index coordinates
    std::vector<std::size_t> chunks;  // chunk boundaries into the offset list

    std::size_t offset_count() const { return kernels.size(); }
    std::size_t chunk_count() const {
        return chunks.size() < 2 ? 0 : chunks.size() - 1;
    }
};

constexpr int kMaxPlanDim = 16;
constexpr std::size_t kMaxOffsets = 300000000;
constexpr std::size_t kChunkTarget = 64;

// The chunk grid is a pure function of (dim, cells, params); reduction order
// therefore never depends on the worker count.
PairPlan build_pair_plan(int dim, int cells, const FractionalParams& prm) {
    if (dim > kMaxPlanDim)
        throw std::invalid_argument("gagliardo: dimension too large for pair enumeration");
    PairPlan plan;
    plan.dim = dim;
    plan.cells = cells;

    double enum_size = 1.0;
    for (int a = 0; a < dim; ++a) enum_size *= 2.0 * cells - 1.0;
    if (enum_size > static_cast<double>(kMaxOffsets))
        throw std::invalid_argument("gagliardo: pair enumeration too large; reduce m");

    const double expo = -0.5 * (dim + prm.p * prm.s);  // applied to |delta|^2
    std::vector<int> d(dim, -(cells - 1));
    std::vector<unsigned long long> work;
    if (cells >= 2) {
        for (;;) {
            int lead = 0;
            for (int a = 0; a < dim; ++a)
                if (d[a] != 0) {
                    lead = d[a];
                    break;
                }
            if (lead > 0) {
                long long d2 = 0;
                unsigned long long w = 1;
                for (int a = 0; a < dim; ++a) {
                    d2 += static_cast<long long>(d[a]) * d[a];
                    w *= static_cast<unsigned long long>(cells - std::abs(d[a]));
                }
                plan.deltas.insert(plan.deltas.end(), d.begin(), d.end());
                plan.kernels.push_back(std::pow(static_cast<double>(d2), expo));
                work.push_back(w);
            }
            int a = dim - 1;
            for (; a >= 0; --a) {
                if (++d[a] <= cells - 1) break;
                d[a] = -(cells - 1);
            }
            if (a < 0) break;
        }
    }

    const std::size_t K = plan.kernels.size();
    if (K == 0) {
        plan.chunks = {0};
        return plan;
    }
    unsigned long long total = 0;
    for (unsigned long long w : work) total += w;
    const std::size_t C = std::min(kChunkTarget, K);
    plan.chunks.reserve(C + 1);
    plan.chunks.push_back(0);
    std::size_t o = 0;
    unsigned long long cum = 0;
    for (std::size_t c = 1; c < C; ++c) {
        const double target = static_cast<double>(total) * c / C;
        while (o < K && static_cast<double>(cum) < target) cum += work[o++];
        plan.chunks.push_back(o);
    }
    plan.chunks.push_back(K);
    return plan;
}

// One chunk of offsets against the value array. `base` is the flat index of
// the evaluated block's origin and `stride` the parent strides, so the same
// code serves the full grid and any aligned subcube without copying. The
// innermost axis is contiguous for both streams; its run is summed plainly
// (vectorizable) and only run totals enter the compensated accumulator, which
// keeps the worst-case error near cells_per_run * eps per run, far inside the
// 1e-12 cross-path budget for positive terms.
template <int Mode>  // 1: |d|, 2: d*d, 0: pow(|d|, p)
double chunk_sum(const PairPlan& plan, const double* v, std::size_t base,
                 const std::size_t* stride, double p, std::size_t c) {
    NeumaierSum acc;
    const int n = plan.dim;
    const int mc = plan.cells;
    int len[kMaxPlanDim];
    std::size_t cnt[kMaxPlanDim];
    for (std::size_t o = plan.chunks[c]; o < plan.chunks[c + 1]; ++o) {
        const int* d = plan.deltas.data() + static_cast<std::size_t>(o) * n;
        const double kern = plan.kernels[o];
        std::ptrdiff_t fdelta = 0;
        std::size_t start = base;
        std::size_t rows = 1;
        for (int a = 0; a < n; ++a) {
            const int da = d[a];
            const int abs_da = da < 0 ? -da : da;
            len[a] = mc - abs_da;
            if (da < 0) start += static_cast<std::size_t>(abs_da) * stride[a];
            fdelta += static_cast<std::ptrdiff_t>(da) *
                      static_cast<std::ptrdiff_t>(stride[a]);
            if (a < n - 1) rows *= static_cast<std::size_t>(len[a]);
        }
        const std::size_t run = static_cast<std::size_t>(len[n - 1]);
        for (int a = 0; a + 1 < n; ++a) cnt[a] = 0;
        for (std::size_t rw = 0; rw < rows; ++rw) {
            std::size_t fi = start;
            for (int a = 0; a + 1 < n; ++a) fi += cnt[a] * stride[a];
            const double* pa = v + fi;
            const double* pb = pa + fdelta;
            double s = 0.0;
            for (std::size_t t = 0; t < run; ++t) {
                const double diff = pa[t] - pb[t];
                if constexpr (Mode == 1)
                    s += std::fabs(diff);
                else if constexpr (Mode == 2)
                    s += diff * diff;
                else
                    s += std::pow(std::fabs(diff), p);
            }
            acc.add(kern * s);
            for (int a = n - 2; a >= 0; --a) {
                if (++cnt[a] < static_cast<std::size_t>(len[a])) break;
                cnt[a] = 0;
            }
        }
    }
    return acc.result();
}

using ChunkFn = double (*)(const PairPlan&, const double*, std::size_t,
                           const std::size_t*, double, std::size_t);

ChunkFn pick_chunk_fn(double p) {
    if (p == 2.0) return &chunk_sum<2>;
    if (p == 1.0) return &chunk_sum<1>;
    return &chunk_sum<0>;
}

std::vector<std::size_t> grid_strides(int dim, int m) {
    std::vector<std::size_t> stride(static_cast<std::size_t>(dim));
    std::size_t s = 1;
    for (int a = dim - 1; a >= 0; --a) {
        stride[static_cast<std::size_t>(a)] = s;
        s *= static_cast<std::size_t>(m);
    }
    return stride;
}

// All chunks of one block, sequentially in chunk order. Grouping is identical
// to the parallel merge below, so both paths produce the same double.
double block_sum_sequential(const PairPlan& plan, ChunkFn fn, const double* v,
                            std::size_t base, const std::size_t* stride,
                            double p) {
    NeumaierSum acc;
    for (std::size_t c = 0; c < plan.chunk_count(); ++c)
        acc.add(fn(plan, v, base, stride, p, c));
    return acc.result();
}

double finalize(double pair_sum, double h, int dim, const FractionalParams& prm) {
    // bracket = 2 * sum * h^(N - ps): h^(2N) cell weights combined with the
    // kernel's h^-(N+ps), the factor 2 restoring ordered pairs.
    const double bracket =
        2.0 * pair_sum * std::pow(h, static_cast<double>(dim) - prm.p * prm.s);
    return std::pow(bracket, 1.0 / prm.p);
}

void run_workers(int workers, std::size_t jobs,
                 const std::function<void(std::size_t)>& body) {
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs) break;
            body(j);
        }
    };
    const std::size_t extra =
        jobs == 0 ? 0
                  : std::min(static_cast<std::size_t>(workers > 1 ? workers - 1 : 0),
                             jobs - 1);
    std::vector<std::thread> pool;
    pool.reserve(extra);
    for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
}

}  // namespace

double gagliardo_naive(const GridFunction& u, const FractionalParams& prm) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const std::size_t M = spec.cell_count();
    const double* v = u.values().data();

    std::vector<double> centers(M * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < M; ++i) {
        const std::vector<int> idx = spec.unflatten(i);
        const std::vector<double> x = spec.cell_center(idx);
        std::copy(x.begin(), x.end(), centers.begin() + i * static_cast<std::size_t>(n));
    }

    const double expo = -0.5 * (n + prm.p * prm.s);  // applied to |x-y|^2
    NeumaierSum acc;
    for (std::size_t i = 0; i < M; ++i) {
        const double* xi = centers.data() + i * static_cast<std::size_t>(n);
        for (std::size_t j = 0; j < M; ++j) {
            if (j == i) continue;
            const double* xj = centers.data() + j * static_cast<std::size_t>(n);
            double d2 = 0.0;
            for (int a = 0; a < n; ++a) {
                const double d = xi[a] - xj[a];
                d2 += d * d;
            }
            acc.add(std::pow(std::fabs(v[i] - v[j]), prm.p) * std::pow(d2, expo));
        }
    }
    const double h = spec.cell_side();
    return std::pow(acc.result() * std::pow(h, 2.0 * n), 1.0 / prm.p);
}

double gagliardo(const GridFunction& u, const FractionalParams& prm, int workers) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const PairPlan plan = build_pair_plan(n, spec.m(), prm);
    const std::vector<std::size_t> stride = grid_strides(n, spec.m());
    const ChunkFn fn = pick_chunk_fn(prm.p);
    const double* v = u.values().data();

    const std::size_t C = plan.chunk_count();
    double pair_sum = 0.0;
    if (C > 0) {
        const int W = std::max(1, std::min<int>(resolve_worker_count(workers),
                                                static_cast<int>(C)));
        std::vector<double> partial(C, 0.0);
        run_workers(W, C, [&](std::size_t c) {
            partial[c] = fn(plan, v, 0, stride.data(), prm.p, c);
        });
        NeumaierSum acc;
        for (double part : partial) acc.add(part);
        pair_sum = acc.result();
    }
    return finalize(pair_sum, spec.cell_side(), n, prm);
}

std::vector<double> gagliardo_subcube_batch(const GridFunction& u,
                                            const FractionalParams& prm, int k,
                                            int workers) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    if (k < 1) throw std::invalid_argument("subcube batch: k must be >= 1");
    if (m % k != 0)
        throw std::invalid_argument(
            "subcube batch: partition depth k must divide the grid resolution m");
    const int sub_m = m / k;
    const PairPlan plan = build_pair_plan(n, sub_m, prm);
    const std::vector<std::size_t> stride = grid_strides(n, m);
    const ChunkFn fn = pick_chunk_fn(prm.p);
    const double* v = u.values().data();
    const double h = spec.cell_side();

    std::size_t count = 1;
    for (int a = 0; a < n; ++a) count *= static_cast<std::size_t>(k);
    std::vector<double> out(count, 0.0);

    // One worker evaluates a whole subcube (its chunks in order), so every
    // entry is bitwise what gagliardo would return for the restriction.
    const int W = std::max(1, std::min<int>(resolve_worker_count(workers),
                                            static_cast<int>(count)));
    run_workers(W, count, [&](std::size_t sc) {
        std::size_t rest = sc;
        std::size_t base = 0;
        for (int a = n - 1; a >= 0; --a) {
            const std::size_t ja = rest % static_cast<std::size_t>(k);
            rest /= static_cast<std::size_t>(k);
            base += ja * static_cast<std::size_t>(sub_m) *
                    stride[static_cast<std::size_t>(a)];
        }
        out[sc] = finalize(
            block_sum_sequential(plan, fn, v, base, stride.data(), prm.p), h, n,
            prm);
    });
    return out;
}

double grad_lp(const GridFunction& u, double p) {
    if (!(std::isfinite(p) && p >= 1.0))
        throw std::invalid_argument("grad_lp: p must be >= 1");
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    if (m < 2) throw std::invalid_argument("grad_lp: requires at least 2 cells per axis");
    const std::vector<std::size_t> stride = grid_strides(n, m);
    const double h = spec.cell_side();
    const double* v = u.values().data();

    // Boundary cells keep the axes whose successor exists; the difference
    // vector just has fewer components there.
    NeumaierSum acc;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    const std::size_t M = spec.cell_count();
    for (std::size_t fl = 0; fl < M; ++fl) {
        double g2 = 0.0;
        for (int a = 0; a < n; ++a) {
            if (idx[static_cast<std::size_t>(a)] + 1 < m) {
                const double d =
                    (v[fl + stride[static_cast<std::size_t>(a)]] - v[fl]) / h;
                g2 += d * d;
            }
        }
        acc.add(std::pow(g2, 0.5 * p));
        for (int a = n - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < m) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return std::pow(acc.result() * std::pow(h, n), 1.0 / p);
}

double bv_seminorm(const GridFunction& u) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    if (m < 2)
        throw std::invalid_argument("bv_seminorm: requires at least 2 cells per axis");
    const std::vector<std::size_t> stride = grid_strides(n, m);
    const double* v = u.values().data();

    NeumaierSum acc;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    const std::size_t M = spec.cell_count();
    for (std::size_t fl = 0; fl < M; ++fl) {
        for (int a = 0; a < n; ++a)
            if (idx[static_cast<std::size_t>(a)] + 1 < m)
                acc.add(std::fabs(v[fl + stride[static_cast<std::size_t>(a)]] - v[fl]));
        for (int a = n - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < m) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return acc.result() * std::pow(spec.cell_side(), n - 1);
}

// ---------------------------------------------------------------------------
// Embedding constant
// ---------------------------------------------------------------------------

namespace {

// Midpoint-rule integral of |z|^-sigma over the shell Q_2 \ Q_1, q cells per
// axis on [-1,1]^N. q is a power of two >= 8, so the inner cube boundary
// falls exactly on cell edges and the inside test is unambiguous.
double shell_integral(int dim, double sigma, int q) {
    const double h = 2.0 / q;
    NeumaierSum acc;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (;;) {
        bool inside = true;
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double c = -1.0 + (idx[static_cast<std::size_t>(a)] + 0.5) * h;
            x[static_cast<std::size_t>(a)] = c;
            if (std::fabs(c) >= 0.5) inside = false;
            r2 += c * c;
        }
        if (!inside) acc.add(std::pow(r2, -0.5 * sigma));
        int a = dim - 1;
        for (; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < q) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0) break;
    }
    return acc.result() * std::pow(h, dim);
}

// The map z -> z/2 sends each shell to the next one with exact factor
// 2^(sigma-N), so the whole Q_2 integral is the outer-shell integral times a
// geometric series. The shell integrand is smooth (|z| >= 1/2), hence the
// midpoint rule is O(h^2) and one Richardson step squares the order; refine
// until successive extrapolants agree to 1e-6 relative.
double quadrature_integral(int dim, double sigma) {
    const double ratio = std::pow(2.0, sigma - dim);  // < 1 since sigma < N
    const double geom = 1.0 / (1.0 - ratio);
    double cells = 1.0;
    int q_cap = 8;
    while (cells * std::pow(2.0, dim) <= 3e7) {
        cells *= std::pow(2.0, dim);
        q_cap *= 2;
    }
    double j_prev = shell_integral(dim, sigma, 8);
    double r_prev = 0.0;
    bool have_prev = false;
    for (int q = 16; q <= q_cap; q *= 2) {
        const double j = shell_integral(dim, sigma, q);
        const double r = (4.0 * j - j_prev) / 3.0;
        if (have_prev && std::fabs(r - r_prev) <= 1e-6 * std::fabs(r))
            return r * geom;
        r_prev = r;
        have_prev = true;
        j_prev = j;
    }
    throw std::runtime_error("embedding_constant: quadrature did not reach 1e-6 agreement");
}

double quadrature_integral_cached(int dim, double sigma) {
    static std::map<std::pair<int, double>, double> cache;
    static std::mutex mu;
    const std::pair<int, double> key{dim, sigma};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = quadrature_integral(dim, sigma);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, value);
    return value;
}

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

}  // namespace

EmbeddingConstant embedding_constant(int dim, const FractionalParams& prm,
                                     EmbeddingMethod method, std::uint64_t mc_seed,
                                     std::uint64_t mc_samples) {
    if (dim < 1) throw std::invalid_argument("embedding_constant: dim must be >= 1");
    const double sigma = dim + prm.p * prm.s - prm.p;

    EmbeddingConstant ec{dim, prm, sigma, 0.0, 0.0, method, 0.0, 0};
    switch (method) {
        case EmbeddingMethod::quadrature:
            ec.integral = quadrature_integral_cached(dim, sigma);
            break;
        case EmbeddingMethod::ball_bound: {
            const double omega =
                std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
            ec.integral = dim * omega *
                          std::pow(std::sqrt(static_cast<double>(dim)), dim - sigma) /
                          (dim - sigma);
            break;
        }
        case EmbeddingMethod::monte_carlo: {
            if (mc_samples < 2)
                throw std::invalid_argument("embedding_constant: need at least 2 samples");
            const double n = static_cast<double>(mc_samples);
            const double vol = std::pow(2.0, dim);
            const double nd = static_cast<double>(dim);
            const double omega =
                std::pow(M_PI, 0.5 * nd) / std::tgamma(0.5 * nd + 1.0);
            // Plain uniform sampling has infinite variance once 2*sigma >= N,
            // making the reported standard error meaningless. The ball core
            // B_rho (inside Q_2) is integrated in closed form instead, and the
            // samples estimate only the bounded truncated kernel; rho is sized
            // so roughly ten samples would land inside the core.
            double rho = 0.0, core = 0.0;
            if (sigma > 0.0) {
                rho = std::min(
                    1.0, std::pow(10.0 * vol / (n * omega), 1.0 / nd));
                core = nd * omega * std::pow(rho, nd - sigma) / (nd - sigma);
            }
            const double rho2 = rho * rho;
            std::mt19937_64 rng(mc_seed);
            NeumaierSum sum, sumsq;
            for (std::uint64_t i = 0; i < mc_samples; ++i) {
                double r2 = 0.0;
                for (int a = 0; a < dim; ++a) {
                    const double c = 2.0 * unit_double(rng) - 1.0;
                    r2 += c * c;
                }
                const double f =
                    r2 <= rho2 || r2 == 0.0 ? 0.0 : std::pow(r2, -0.5 * sigma);
                sum.add(f);
                sumsq.add(f * f);
            }
            const double mean = sum.result() / n;
            const double var =
                std::max(0.0, (sumsq.result() - n * mean * mean) / (n - 1.0));
            ec.integral = core + vol * mean;
            ec.std_error = vol * std::sqrt(var / n);
            ec.samples = mc_samples;
            break;
        }
    }
    ec.value = std::pow(ec.integral, 1.0 / prm.p);
    return ec;
}

}  // namespace clustercert
