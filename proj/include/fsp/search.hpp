#pragma once

// Exact maximum avoiding families at small n.
//
// Depth-first include/exclude branching over candidate sets ordered by
// distance from the middle level, then by bitmask. The list of remaining
// candidates is kept filtered to sets that can still be added individually:
// avoidance is inherited by subfamilies, so a set that completes a forbidden
// configuration now does so in every extension. A node is pruned when the
// current size plus the surviving candidates cannot beat the incumbent.
//
// With symmetry on, the root branches once per set size s (in candidate order):
// the family contains {1..s} and no set of an earlier size. Any family maps
// onto one of these branches under a permutation of [n].
//
// Root branches are independent tasks whose incumbents all start from the
// greedy family. Outcomes are reduced by (size, smallest sorted witness), so
// the result and the node counts do not depend on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fsp/arith.hpp"
#include "fsp/detector.hpp"
#include "fsp/error.hpp"
#include "fsp/lattice.hpp"
#include "fsp/poset.hpp"

namespace fsp {

inline constexpr int kProvenOptimalMaxN = 6;
inline constexpr int kSearchMaxN = 12;

struct SearchOptions {
    bool symmetry = true;
    std::optional<Rational> theorem_bound;  // exact bound value used for early stopping
    std::string theorem_bound_source;
    double time_limit_seconds = 600.0;
    bool include_empty_and_full = true;
    int workers = 1;
};

struct SearchProblem {
    GroundSet ground;
    ConfigSet configs;
    EmbedMode mode = EmbedMode::standard;
    SearchOptions options;
};

enum class SearchStatus { proven_optimal, lower_bound_only, optimal_assuming_theorem };

inline const char* to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::proven_optimal: return "proven-optimal";
    case SearchStatus::lower_bound_only: return "lower-bound-only";
    case SearchStatus::optimal_assuming_theorem: return "optimal-assuming-theorem";
    }
    return "unknown";
}

struct SearchResult {
    std::size_t best_size = 0;
    Family witness;
    SearchStatus status = SearchStatus::lower_bound_only;
    std::uint64_t nodes = 0;
    std::uint64_t prunes = 0;
    bool exhausted = false;   // every branch finished without timeout or early stop
    double wall_time = 0.0;   // seconds
};

/// Candidate sets in branching order: |2|S| - n| ascending, then bitmask ascending.
inline std::vector<SubsetMask> candidate_order(const GroundSet& g, bool include_empty_and_full) {
    if (g.n() > kSearchMaxN) throw RangeError("search: n must be at most 12");
    std::vector<SubsetMask> out;
    for (std::uint64_t b = 0; b <= g.full_bits(); ++b) {
        if (!include_empty_and_full && (b == 0 || b == g.full_bits())) continue;
        out.emplace_back(b);
    }
    const int n = g.n();
    std::stable_sort(out.begin(), out.end(), [n](SubsetMask a, SubsetMask b) {
        const int da = std::abs(2 * a.size() - n), db = std::abs(2 * b.size() - n);
        if (da != db) return da < db;
        return a.bits < b.bits;
    });
    return out;
}

namespace detail {

// True iff adding `s` to `family` completes a forbidden configuration. `family` is restored.
inline bool blocks(Family& family, SubsetMask s, const ConfigSet& configs, EmbedMode mode) {
    const std::uint32_t idx = family.push(s);
    const bool bad = violates_on_add_unchecked(family, idx, configs, mode);
    family.pop();
    return bad;
}

} // namespace detail

/// Maximal avoiding family: candidates in branching order, each added unless it would violate.
inline Family greedy_lower_bound(const SearchProblem& problem) {
    Family family(problem.ground);
    for (SubsetMask s : candidate_order(problem.ground, problem.options.include_empty_and_full))
        if (!detail::blocks(family, s, problem.configs, problem.mode)) family.push(s);
    return family;
}

/// True iff the witness avoids every configuration and has the reported size.
inline bool verify_witness(const SearchResult& result, const SearchProblem& problem) {
    return result.witness.ground() == problem.ground && result.witness.size() == result.best_size &&
           is_avoiding(result.witness, problem.configs, problem.mode);
}

namespace detail {

class BranchSearch {
public:
    using Clock = std::chrono::steady_clock;

    BranchSearch(const SearchProblem& problem, std::size_t incumbent, Clock::time_point deadline)
        : problem_(problem), family_(problem.ground), best_size_(incumbent), deadline_(deadline) {
        if (problem.options.theorem_bound) bound_ = floor(*problem.options.theorem_bound);
    }

    /// Explores the subtree below `start` with the given (already filtered) candidates.
    void run(const std::vector<SubsetMask>& start, std::vector<SubsetMask> candidates) {
        for (SubsetMask s : start) family_.push(s);
        dfs(candidates);
    }

    std::size_t best_size() const { return best_size_; }
    const std::optional<Family>& best() const { return best_; }
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t prunes() const { return prunes_; }
    bool timed_out() const { return timed_out_; }
    bool hit_bound() const { return hit_bound_; }

private:
    bool should_stop() {
        if (timed_out_ || hit_bound_) return true;
        if ((nodes_ & 0x3ff) == 0 && Clock::now() >= deadline_) timed_out_ = true;
        return timed_out_;
    }

    void dfs(const std::vector<SubsetMask>& remaining) {
        ++nodes_;
        if (should_stop()) return;
        if (family_.size() > best_size_) {
            best_size_ = family_.size();
            best_ = family_;
            if (bound_ && BigInt(best_size_) >= *bound_) {
                hit_bound_ = true;
                return;
            }
        }
        if (family_.size() + remaining.size() <= best_size_) {
            ++prunes_;
            return;
        }
        const SubsetMask pick = remaining.front();
        // Include.
        family_.push(pick);
        std::vector<SubsetMask> kept;
        kept.reserve(remaining.size() - 1);
        for (std::size_t i = 1; i < remaining.size(); ++i)
            if (!blocks(family_, remaining[i], problem_.configs, problem_.mode)) kept.push_back(remaining[i]);
        dfs(kept);
        family_.pop();
        if (should_stop()) return;
        // Exclude.
        std::vector<SubsetMask> rest(remaining.begin() + 1, remaining.end());
        dfs(rest);
    }

    const SearchProblem& problem_;
    Family family_;
    std::size_t best_size_;
    std::optional<Family> best_;
    std::optional<BigInt> bound_;
    Clock::time_point deadline_;
    std::uint64_t nodes_ = 0;
    std::uint64_t prunes_ = 0;
    bool timed_out_ = false;
    bool hit_bound_ = false;
};

struct RootTask {
    std::vector<SubsetMask> start;
    std::vector<SubsetMask> candidates;
};

struct TaskOutcome {
    std::size_t best_size = 0;
    std::optional<Family> best;
    std::uint64_t nodes = 0;
    std::uint64_t prunes = 0;
    bool timed_out = false;
    bool hit_bound = false;
};

} // namespace detail

/// Maximum size of a family over [n] avoiding every configuration in the problem.
/// Status is proven-optimal only for n <= 6 with the search exhausted.
inline SearchResult exact_max_family(const SearchProblem& problem) {
    using Clock = detail::BranchSearch::Clock;
    const auto started = Clock::now();
    const SearchOptions& opt = problem.options;
    if (!(opt.time_limit_seconds > 0)) throw ArgumentError("search: time limit must be positive");
    const auto deadline = started + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opt.time_limit_seconds));

    const auto order = candidate_order(problem.ground, opt.include_empty_and_full);
    const Family greedy = greedy_lower_bound(problem);

    SearchResult result{greedy.size(), greedy, SearchStatus::lower_bound_only, 0, 0, false, 0.0};

    std::optional<BigInt> bound;
    if (opt.theorem_bound) bound = floor(*opt.theorem_bound);
    const bool greedy_meets_bound = bound && BigInt(greedy.size()) >= *bound;

    std::vector<detail::RootTask> tasks;
    if (!greedy_meets_bound) {
        Family empty(problem.ground);
        std::vector<SubsetMask> addable;
        for (SubsetMask s : order)
            if (!detail::blocks(empty, s, problem.configs, problem.mode)) addable.push_back(s);
        if (!opt.symmetry) {
            tasks.push_back({{}, addable});
        } else {
            std::vector<int> seen_sizes;
            for (SubsetMask s : order) {
                const int k = s.size();
                if (std::find(seen_sizes.begin(), seen_sizes.end(), k) != seen_sizes.end()) continue;
                seen_sizes.push_back(k);
                const SubsetMask rep((k == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1));
                if (std::find(addable.begin(), addable.end(), rep) == addable.end()) continue;
                detail::RootTask task;
                task.start = {rep};
                Family base(problem.ground);
                base.push(rep);
                for (SubsetMask c : addable) {
                    if (c == rep) continue;
                    const bool earlier = std::find(seen_sizes.begin(), seen_sizes.end() - 1, c.size()) != seen_sizes.end() - 1;
                    if (earlier) continue;
                    if (!detail::blocks(base, c, problem.configs, problem.mode)) task.candidates.push_back(c);
                }
                tasks.push_back(std::move(task));
            }
        }
    }

    std::vector<detail::TaskOutcome> outcomes(tasks.size());
    auto run_task = [&](std::size_t i) {
        detail::BranchSearch search(problem, greedy.size(), deadline);
        search.run(tasks[i].start, tasks[i].candidates);
        outcomes[i] = {search.best_size(), search.best(), search.nodes(), search.prunes(), search.timed_out(), search.hit_bound()};
    };
    const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(tasks.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(i);
            });
        for (auto& t : pool) t.join();
    }

    bool timed_out = false, hit_bound = greedy_meets_bound;
    for (const auto& o : outcomes) {
        result.nodes += o.nodes;
        result.prunes += o.prunes;
        timed_out = timed_out || o.timed_out;
        hit_bound = hit_bound || o.hit_bound;
        if (o.best && (o.best_size > result.best_size ||
                       (o.best_size == result.best_size && o.best->sorted_members() < result.witness.sorted_members()))) {
            result.best_size = o.best_size;
            result.witness = *o.best;
        }
    }
    result.exhausted = !timed_out && !hit_bound;
    if (timed_out) {
        result.status = SearchStatus::lower_bound_only;
    } else if (hit_bound) {
        result.status = SearchStatus::optimal_assuming_theorem;
    } else {
        result.status = SearchStatus::proven_optimal;
    }
    if (problem.ground.n() > kProvenOptimalMaxN && result.status != SearchStatus::lower_bound_only)
        result.status = SearchStatus::lower_bound_only;
    if (!verify_witness(result, problem)) throw std::logic_error("search produced a witness that fails verification");
    result.wall_time = std::chrono::duration<double>(Clock::now() - started).count();
    return result;
}

} // namespace fsp
