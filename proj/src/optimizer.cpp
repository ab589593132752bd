// Copyright 2026 The qbattery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbattery/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "qbattery/errors.hpp"

namespace qbattery {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double haar_polar_angle(CounterRng &rng) { return std::acos(std::clamp(1.0 - 2.0 * rng.uniform(), -1.0, 1.0)); }

// Index of the evolution time within a family's parameter vector.
std::size_t time_index(Family family) { return family == Family::kSeparable ? 3 : 2; }

struct Candidate {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    ParameterVector params;
    Outcome outcome = Outcome::kAligned;
};

// Exploration keeps the best few candidates (value descending, index
// ascending on ties) as refinement starting points.
constexpr std::size_t kRefinementStarts = 8;

bool ranks_before(const Candidate &a, const Candidate &b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
}

void offer(std::vector<Candidate> &leaders, Candidate candidate) {
    if (leaders.size() == kRefinementStarts && !ranks_before(candidate, leaders.back())) {
        return;
    }
    auto pos = std::upper_bound(leaders.begin(), leaders.end(), candidate, ranks_before);
    leaders.insert(pos, std::move(candidate));
    if (leaders.size() > kRefinementStarts) {
        leaders.pop_back();
    }
}

struct ChunkResult {
    std::vector<Candidate> leaders;
    std::vector<TracePoint> improvements;
};

ChunkResult explore_chunk(const ParameterObjective &objective, std::uint64_t seed, std::uint64_t begin,
                          std::uint64_t end) {
    ChunkResult out;
    double running = -std::numeric_limits<double>::infinity();
    for (std::uint64_t n = begin; n < end; ++n) {
        CounterRng rng(seed, n);
        ParameterVector params = sample_point(objective.space(), rng);
        if (n == 0) {
            params[time_index(objective.space().family)] = 0.0;
        }
        const ProtocolEngine::Score score = objective(params);
        if (score.w_p > running) {
            running = score.w_p;
            out.improvements.push_back({n, score.w_p});
        }
        if (out.leaders.size() < kRefinementStarts || score.w_p > out.leaders.back().value) {
            offer(out.leaders, {score.w_p, n, std::move(params), score.outcome});
        }
    }
    return out;
}

// Sequential evaluation counter shared by all refinement runs; owns the
// global incumbent and the improvement trace.
class RefinementLedger {
  public:
    RefinementLedger(const ParameterObjective &objective, Candidate incumbent, std::uint64_t first_index,
                     std::uint64_t budget, std::vector<TracePoint> &trace)
        : objective_(objective), best_(std::move(incumbent)), next_index_(first_index), remaining_(budget), trace_(trace) {}

    std::uint64_t remaining() const noexcept { return remaining_; }
    const Candidate &best() const noexcept { return best_; }

    ProtocolEngine::Score evaluate(const ParameterVector &point) {
        --remaining_;
        const std::uint64_t index = next_index_++;
        const ProtocolEngine::Score score = objective_(point);
        if (score.w_p > best_.value) {
            best_ = {score.w_p, index, point, score.outcome};
            trace_.push_back({index, score.w_p});
        }
        return score;
    }

  private:
    const ParameterObjective &objective_;
    Candidate best_;
    std::uint64_t next_index_;
    std::uint64_t remaining_;
    std::vector<TracePoint> &trace_;
};

// Coordinate-wise golden-section ascent from one starting point. Each line
// search covers [x_j - w_j, x_j + w_j] clipped to the bounds; w_j doubles when
// the line optimum lands near the window edge and halves otherwise.
class CoordinateAscent {
  public:
    CoordinateAscent(RefinementLedger &ledger, const std::vector<ParameterBounds> &bounds, Candidate start)
        : ledger_(ledger), bounds_(bounds), point_(std::move(start)), widths_(bounds.size()) {
        for (std::size_t j = 0; j < bounds_.size(); ++j) {
            widths_[j] = 0.1 * span(j);
        }
    }

    void run(std::uint64_t evaluations) {
        const std::uint64_t stop_at = ledger_.remaining() - std::min(evaluations, ledger_.remaining());
        while (ledger_.remaining() > stop_at) {
            for (std::size_t j = 0; j < bounds_.size() && ledger_.remaining() > stop_at; ++j) {
                line_search(j, stop_at);
            }
            bool collapsed = true;
            for (std::size_t j = 0; j < bounds_.size(); ++j) {
                collapsed = collapsed && widths_[j] < 1e-9 * span(j);
            }
            if (collapsed) {
                for (std::size_t j = 0; j < bounds_.size(); ++j) {
                    widths_[j] = 0.02 * span(j);
                }
            }
        }
    }

  private:
    static constexpr int kEvaluationsPerLine = 12;

    double span(std::size_t j) const { return bounds_[j].upper - bounds_[j].lower; }

    void line_search(std::size_t j, std::uint64_t stop_at) {
        const double center = point_.params[j];
        const double width = widths_[j];
        double lo = std::max(bounds_[j].lower, center - width);
        double hi = std::min(bounds_[j].upper, center + width);
        if (!(hi > lo)) {
            widths_[j] = 0.1 * span(j);
            return;
        }
        const double window_lo = lo;
        const double window_hi = hi;
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        ParameterVector probe = point_.params;
        Candidate line_best = point_;
        auto value_at = [&](double x) {
            probe[j] = x;
            const ProtocolEngine::Score score = ledger_.evaluate(probe);
            if (score.w_p > line_best.value) {
                line_best = {score.w_p, 0, probe, score.outcome};
            }
            return score.w_p;
        };
        double left = hi - ratio * (hi - lo);
        double right = lo + ratio * (hi - lo);
        double f_left = value_at(left);
        double f_right = ledger_.remaining() > stop_at ? value_at(right) : f_left;
        for (int it = 2; it < kEvaluationsPerLine && ledger_.remaining() > stop_at; ++it) {
            if (f_left >= f_right) {
                hi = right;
                right = left;
                f_right = f_left;
                left = hi - ratio * (hi - lo);
                f_left = value_at(left);
            } else {
                lo = left;
                left = right;
                f_left = f_right;
                right = lo + ratio * (hi - lo);
                f_right = value_at(right);
            }
        }
        const double moved_to = line_best.params[j];
        const double edge = 0.1 * (window_hi - window_lo);
        const bool at_edge = (moved_to - window_lo < edge && window_lo > bounds_[j].lower) ||
                             (window_hi - moved_to < edge && window_hi < bounds_[j].upper);
        widths_[j] = at_edge ? std::min(2.0 * width, 0.5 * span(j)) : 0.5 * width;
        point_ = std::move(line_best);
    }

    RefinementLedger &ledger_;
    const std::vector<ParameterBounds> &bounds_;
    Candidate point_;
    std::vector<double> widths_;
};

double running_best_at(const std::vector<TracePoint> &trace, std::uint64_t index) {
    double value = -std::numeric_limits<double>::infinity();
    for (const TracePoint &p : trace) {
        if (p.sample_index > index) {
            break;
        }
        value = p.running_best;
    }
    return value;
}

}  // namespace

std::string_view to_string(Family family) { return family == Family::kSeparable ? "separable" : "entangled"; }

std::vector<ParameterBounds> parameter_bounds(const SearchSpace &space) {
    if (!(std::abs(space.k) <= 1.0)) {
        throw ConfigurationError("search space: k must lie in [-1, 1]");
    }
    if (!(space.t_max > 0.0) || !std::isfinite(space.t_max)) {
        throw ConfigurationError("search space: t_max must be positive and finite");
    }
    constexpr double pi = std::numbers::pi;
    if (space.family == Family::kSeparable) {
        return {{0.0, 1.0}, {0.0, pi}, {0.0, kTwoPi}, {0.0, space.t_max}, {0.0, pi}, {0.0, kTwoPi}};
    }
    return {{0.0, pi}, {0.0, kTwoPi}, {0.0, space.t_max}, {0.0, pi}, {0.0, kTwoPi}};
}

std::vector<std::string_view> parameter_names(Family family) {
    if (family == Family::kSeparable) {
        return {"r", "theta1", "phi1", "t", "theta", "phi"};
    }
    return {"theta2", "phi2", "t", "theta", "phi"};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix_finalize(seed ^ splitmix_finalize(stream * kGolden64 + 0x632BE59BD9B4E019ULL));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(derive_seed(seed, stream)) {}

std::uint64_t CounterRng::next_u64() {
    state_ += kGolden64;
    return splitmix_finalize(state_);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

ParameterVector sample_point(const SearchSpace &space, CounterRng &rng) {
    ParameterVector out;
    if (space.family == Family::kSeparable) {
        out.reserve(6);
        out.push_back(rng.uniform());
        out.push_back(haar_polar_angle(rng));
        out.push_back(kTwoPi * rng.uniform());
    } else {
        out.reserve(5);
        out.push_back(haar_polar_angle(rng));
        out.push_back(kTwoPi * rng.uniform());
    }
    out.push_back(space.t_max * rng.uniform());
    out.push_back(haar_polar_angle(rng));
    out.push_back(kTwoPi * rng.uniform());
    return out;
}

ParameterObjective::ParameterObjective(const SearchSpace &space, const HamiltonianSpec &spec)
    : space_(space), engine_(spec), battery_(battery_state(space.k).matrix()), initial_energy_(spec.h() * space.k) {
    parameter_bounds(space);
}

ProtocolEngine::Score ParameterObjective::operator()(const ParameterVector &params) const {
    if (space_.family == Family::kSeparable) {
        const BlochVector aux{std::clamp(params[0], 0.0, 1.0), params[1], params[2]};
        const ComplexMatrix rho0 = kron(battery_, bloch_state(aux).matrix());
        return engine_.best_score(rho0, initial_energy_, params[3], MeasurementBasis{params[4], params[5]});
    }
    const TwoQubitKet psi = entangled_initial_ket({space_.k, params[0], params[1]});
    ComplexMatrix rho0(4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            rho0(i, j) = psi[i] * std::conj(psi[j]);
        }
    }
    return engine_.best_score(rho0, initial_energy_, params[2], MeasurementBasis{params[3], params[4]});
}

OptimizationReport optimize(const SearchSpace &space, const HamiltonianSpec &spec, std::uint64_t budget,
                            std::uint64_t seed, const OptimizerOptions &options) {
    if (budget < 1) {
        throw ConfigurationError("optimizer budget must be at least 1");
    }
    if (!(options.exploration_fraction > 0.0 && options.exploration_fraction <= 1.0)) {
        throw ConfigurationError("exploration fraction must lie in (0, 1]");
    }
    std::vector<ParameterBounds> bounds = parameter_bounds(space);
    const ParameterObjective objective(space, spec);

    const auto explore_count = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::floor(options.exploration_fraction * static_cast<double>(budget))));
    const std::uint64_t refine_count = budget - explore_count;

    const unsigned workers = static_cast<unsigned>(
        std::clamp<std::uint64_t>(options.threads == 0 ? 1 : options.threads, 1, explore_count));
    std::vector<ChunkResult> chunks(workers);
    auto chunk_begin = [&](unsigned w) { return explore_count * w / workers; };
    if (workers == 1) {
        chunks[0] = explore_chunk(objective, seed, 0, explore_count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] { chunks[w] = explore_chunk(objective, seed, chunk_begin(w), chunk_begin(w + 1)); });
        }
        for (std::thread &t : pool) {
            t.join();
        }
    }

    // Chunks are merged in index order, so the global prefix maxima (and the
    // lowest-index tie winner) match a sequential scan exactly.
    OptimizationReport report;
    report.seed = seed;
    std::vector<Candidate> leaders;
    for (ChunkResult &chunk : chunks) {
        for (const TracePoint &p : chunk.improvements) {
            if (report.trace.empty() || p.running_best > report.trace.back().running_best) {
                report.trace.push_back(p);
            }
        }
        for (Candidate &c : chunk.leaders) {
            offer(leaders, std::move(c));
        }
    }
    report.exploration_best = leaders.front().value;

    // Half of the refinement budget is shared among the leading exploration
    // candidates; the rest polishes the overall best.
    RefinementLedger ledger(objective, leaders.front(), explore_count, refine_count, report.trace);
    const std::uint64_t per_start = refine_count / (2 * leaders.size());
    for (const Candidate &start : leaders) {
        CoordinateAscent(ledger, bounds, start).run(per_start);
    }
    CoordinateAscent(ledger, bounds, ledger.best()).run(ledger.remaining());
    Candidate best = ledger.best();

    report.best_value = best.value;
    report.best_params = std::move(best.params);
    report.best_outcome = best.outcome;
    report.samples_used = budget;

    const std::uint64_t window = (budget + 4) / 5;
    const double before = budget > window ? running_best_at(report.trace, budget - window - 1)
                                          : running_best_at(report.trace, 0);
    report.converged = report.best_value - before < options.convergence_tolerance * spec.h();
    return report;
}

}  // namespace qbattery
