#include "spherequad/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "spherequad/errors.hpp"
#include "spherequad/rectangle.hpp"
#include "spherequad/square_optimizer.hpp"

namespace spherequad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRecenter = 20;
constexpr std::size_t kHotSize = 16;

double grid_coord(int k, int n) { return k == n - 1 ? 1.0 : -1.0 + 2.0 * k / (n - 1); }

// Error samples as affine functions of D shape parameters:
// p = parts[0] + x_0 parts[1] + ... + x_{D-1} parts[D].
template <int D>
class Evaluator {
public:
    using Point = std::array<double, D>;

    Evaluator(ErrorKind kind, std::vector<std::array<Vec3, D + 1>> samples)
        : kind_(kind), samples_(std::move(samples)) {}

    // Max |error| over the samples. Once the running max exceeds `cutoff`
    // the scan stops and that partial (lower bound) value is returned.
    double minimax(const Point& x, double cutoff = kInf) {
        double worst = 0.0;
        auto visit = [&](std::size_t s) {
            const auto& parts = samples_[s];
            Vec3 p = parts[0];
            for (int d = 0; d < D; ++d)
                p += x[d] * parts[d + 1];
            return std::abs(error_of_point(p, kind_));
        };
        for (std::size_t s : hot_) {
            worst = std::max(worst, visit(s));
            if (worst > cutoff)
                return worst;
        }
        for (std::size_t s = 0; s < samples_.size(); ++s) {
            const double e = visit(s);
            if (e > worst) {
                worst = e;
                if (worst > cutoff) {
                    remember(s);
                    return worst;
                }
            }
        }
        return worst;
    }

private:
    void remember(std::size_t s) {
        auto it = std::find(hot_.begin(), hot_.end(), s);
        if (it != hot_.end())
            hot_.erase(it);
        hot_.insert(hot_.begin(), s);
        if (hot_.size() > kHotSize)
            hot_.pop_back();
    }

    ErrorKind kind_;
    std::vector<std::array<Vec3, D + 1>> samples_;
    std::vector<std::size_t> hot_;
};

template <int D>
struct LevelResult {
    std::array<double, D> best{};
    std::array<int, D> index{};
    double value = kInf;
    std::vector<std::array<double, D>> ties;
};

template <int D>
int axis_points(const Range& r, int n) {
    return r.width() > 0.0 ? n : 1;
}

template <int D>
double axis_value(const Range& r, int k, int n) {
    return n == 1 ? r.lo : (k == n - 1 ? r.hi : r.lo + r.width() * k / (n - 1));
}

// Lexicographic scan, so the first strict minimum is also the
// lexicographically smallest among exact ties.
template <int D>
LevelResult<D> search_level(Evaluator<D>& ev, const std::vector<Range>& box, int n, double tie_tol) {
    std::array<int, D> counts{};
    for (int d = 0; d < D; ++d)
        counts[d] = axis_points<D>(box[d], n);

    LevelResult<D> r;
    std::vector<std::pair<std::array<double, D>, double>> candidates;
    std::array<int, D> idx{};
    for (;;) {
        std::array<double, D> x{};
        for (int d = 0; d < D; ++d)
            x[d] = axis_value<D>(box[d], idx[d], counts[d]);
        const double m = ev.minimax(x, r.value + tie_tol);
        if (m <= r.value + tie_tol)
            candidates.emplace_back(x, m);
        if (m < r.value) {
            r.value = m;
            r.best = x;
            r.index = idx;
        }
        int d = D - 1;
        while (d >= 0 && ++idx[d] == counts[d]) {
            idx[d] = 0;
            --d;
        }
        if (d < 0)
            break;
    }
    for (const auto& [x, m] : candidates)
        if (m <= r.value + tie_tol)
            r.ties.push_back(x);
    return r;
}

template <int D>
bool on_edge(const LevelResult<D>& r, const std::vector<Range>& box, int n, const std::vector<Range>& outer,
             bool outer_only) {
    for (int d = 0; d < D; ++d) {
        if (box[d].width() <= 0.0)
            continue;
        const bool lo = r.index[d] == 0;
        const bool hi = r.index[d] == n - 1;
        if (outer_only) {
            if (lo || hi)
                return true;
        } else if ((lo && box[d].lo > outer[d].lo) || (hi && box[d].hi < outer[d].hi)) {
            return true;
        }
    }
    return false;
}

template <int D>
std::vector<Range> zoom_box(const std::array<double, D>& center, const std::vector<Range>& box,
                            const std::vector<Range>& outer) {
    std::vector<Range> z(D);
    for (int d = 0; d < D; ++d) {
        const double half = box[d].width() / 20.0;
        double lo = center[d] - half;
        double hi = center[d] + half;
        if (lo < outer[d].lo) {
            hi += outer[d].lo - lo;
            lo = outer[d].lo;
        }
        if (hi > outer[d].hi) {
            lo -= hi - outer[d].hi;
            hi = outer[d].hi;
        }
        z[d] = {std::max(lo, outer[d].lo), hi};
    }
    return z;
}

template <int D>
std::vector<Range> recenter(const std::array<double, D>& center, const std::vector<Range>& box,
                            const std::vector<Range>& outer) {
    std::vector<Range> z(D);
    for (int d = 0; d < D; ++d) {
        const double half = box[d].width() / 2.0;
        const double lo = std::clamp(center[d] - half, outer[d].lo, outer[d].hi - box[d].width());
        z[d] = {lo, lo + box[d].width()};
    }
    return z;
}

struct SearchOutcome {
    GridSpec spec;
    double value = 0.0;
    double neighbour_spread = 0.0;
};

template <int D>
SearchOutcome run_search(Evaluator<D>& ev, std::vector<Range> box, const OracleOptions& o,
                         std::array<double, D>& best, std::vector<std::array<double, D>>& ties) {
    SearchOutcome out;
    out.spec.n_param = o.n_param;
    out.spec.n_uv = o.n_uv;

    LevelResult<D> level = search_level<D>(ev, box, o.n_param, o.tie_tol);
    if (on_edge<D>(level, box, o.n_param, box, true)) {
        std::vector<Range> wide(D);
        for (int d = 0; d < D; ++d)
            wide[d] = box[d].width() > 0.0
                          ? Range{std::max(box[d].mid() - box[d].width(), 1e-3), box[d].mid() + box[d].width()}
                          : box[d];
        out.spec.level_ranges.push_back(box);
        out.spec.widened = true;
        box = wide;
        level = search_level<D>(ev, box, o.n_param, o.tie_tol);
        if (on_edge<D>(level, box, o.n_param, box, true))
            throw SolverError("oracle optimum on the boundary of the widened parameter box");
    }
    out.spec.level_ranges.push_back(box);
    const std::vector<Range> outer = box;

    for (int l = 0; l < o.levels; ++l) {
        std::vector<Range> z = zoom_box<D>(level.best, box, outer);
        LevelResult<D> next = search_level<D>(ev, z, o.n_param, o.tie_tol);
        for (int k = 0; k < kMaxRecenter && on_edge<D>(next, z, o.n_param, outer, false); ++k) {
            z = recenter<D>(next.best, z, outer);
            next = search_level<D>(ev, z, o.n_param, o.tie_tol);
        }
        box = z;
        level = next;
        out.spec.level_ranges.push_back(box);
    }

    // neighbours at one final grid step in every direction
    std::array<double, D> step{};
    for (int d = 0; d < D; ++d)
        step[d] = box[d].width() > 0.0 ? box[d].width() / (o.n_param - 1) : 0.0;
    std::array<int, D> off{};
    off.fill(-1);
    for (;;) {
        bool centre = true;
        std::array<double, D> x = level.best;
        for (int d = 0; d < D; ++d) {
            x[d] += off[d] * step[d];
            centre = centre && off[d] == 0;
        }
        if (!centre)
            out.neighbour_spread = std::max(out.neighbour_spread, std::abs(ev.minimax(x) - level.value));
        int d = D - 1;
        while (d >= 0 && ++off[d] == 2) {
            off[d] = -1;
            --d;
        }
        if (d < 0)
            break;
    }

    best = level.best;
    ties = level.ties;
    out.value = level.value;
    return out;
}

void check_options(const OracleOptions& o, std::initializer_list<Range> ranges) {
    if (o.n_param < 41)
        throw ParameterError("oracle needs n_param >= 41");
    if (o.n_uv < 201 || o.n_uv % 2 == 0)
        throw ParameterError("oracle needs an odd n_uv >= 201");
    if (o.levels < 0 || o.tie_tol < 0.0)
        throw ParameterError("oracle levels and tie tolerance must be non-negative");
    for (const Range& r : ranges)
        if (!(r.lo > 0.0) || !(r.hi >= r.lo))
            throw ParameterError("oracle ranges need 0 < lo <= hi");
}

} // namespace

OracleResult<SquareParams> grid_minimax_square(double a, ErrorKind kind, Range alpha, Range beta,
                                               const OracleOptions& opts) {
    check_options(opts, {alpha, beta});
    const SquareNetParts parts = square_net_parts(a);
    const int half = (opts.n_uv + 1) / 2;

    // the error is even along the side and along the diagonal
    std::vector<std::array<Vec3, 3>> samples;
    samples.reserve(2 * half);
    for (int k = 0; k < half; ++k) {
        const double u = grid_coord(half - 1 + k, opts.n_uv);
        samples.push_back({eval_patch(parts.base, u, -1.0), eval_patch(parts.alpha_part, u, -1.0),
                           eval_patch(parts.beta_part, u, -1.0)});
        samples.push_back({eval_patch(parts.base, u, u), eval_patch(parts.alpha_part, u, u),
                           eval_patch(parts.beta_part, u, u)});
    }
    Evaluator<2> ev(kind, std::move(samples));

    std::array<double, 2> best{};
    std::vector<std::array<double, 2>> ties;
    const SearchOutcome s = run_search<2>(ev, {alpha, beta}, opts, best, ties);

    OracleResult<SquareParams> r;
    r.best_params = {a, best[0], best[1]};
    r.best_minimax = s.value;
    r.grid_spec = s.spec;
    for (const auto& t : ties)
        r.near_ties.push_back({a, t[0], t[1]});

    const double refined = angle_extrema(r.best_params, kind).max_abs();
    r.slack = s.neighbour_spread + std::max(0.0, refined - s.value);
    const GridExtrema full = grid_extrema(square_net(r.best_params), kind, opts.n_uv);
    r.full_square_minimax = std::max(full.max, -full.min);
    return r;
}

OracleResult<RectParams> grid_minimax_rect(double a, double b, ErrorKind kind, Range alpha1, Range alpha2,
                                           Range beta, const OracleOptions& opts) {
    check_options(opts, {alpha1, alpha2, beta});
    const RectNetParts parts = rect_net_parts(a, b);
    const int half = (opts.n_uv + 1) / 2;

    // even in u and in v: one quadrant suffices
    std::vector<std::array<Vec3, 4>> samples;
    samples.reserve(static_cast<std::size_t>(half) * half);
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j) {
            const double u = grid_coord(half - 1 + i, opts.n_uv);
            const double v = grid_coord(half - 1 + j, opts.n_uv);
            samples.push_back({eval_patch(parts.base, u, v), eval_patch(parts.alpha1_part, u, v),
                               eval_patch(parts.alpha2_part, u, v), eval_patch(parts.beta_part, u, v)});
        }
    Evaluator<3> ev(kind, std::move(samples));

    std::array<double, 3> best{};
    std::vector<std::array<double, 3>> ties;
    const SearchOutcome s = run_search<3>(ev, {alpha1, alpha2, beta}, opts, best, ties);

    OracleResult<RectParams> r;
    r.best_params = {a, b, best[0], best[1], best[2]};
    r.best_minimax = s.value;
    r.grid_spec = s.spec;
    for (const auto& t : ties)
        r.near_ties.push_back({a, b, t[0], t[1], t[2]});

    const double refined = rect_extrema(r.best_params, kind).max_abs();
    r.slack = s.neighbour_spread + std::max(0.0, refined - s.value);
    r.full_square_minimax = s.value;
    return r;
}

} // namespace spherequad
