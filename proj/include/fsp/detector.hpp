#pragma once

// Embedding detection of colored posets into families.
//
// Elements are assigned color by color in ascending order. For each color a
// single set size is chosen first, then the elements of that color are matched
// inside that size class of the family. Because the coloring is
// order-preserving, all predecessors of an element are already placed when
// the element is reached, so inclusion is checked against placed images only.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "fsp/arith.hpp"
#include "fsp/error.hpp"
#include "fsp/lattice.hpp"
#include "fsp/poset.hpp"

namespace fsp {

enum class EmbedMode { standard, induced };

inline const char* to_string(EmbedMode m) { return m == EmbedMode::induced ? "induced" : "standard"; }

/// assignment[a] is the index into Family::members() of the image of element a.
using Embedding = std::vector<std::uint32_t>;

struct Pin {
    int element;
    std::uint32_t member;
};

/// Independent check of every embedding invariant: injectivity, strict
/// inclusion along the order, equal sizes within a color, and in induced mode
/// that inclusion between images implies order.
inline bool verify_embedding(const Family& family, const ColoredPoset& poset, EmbedMode mode, const Embedding& emb) {
    const int p = poset.size();
    if (static_cast<int>(emb.size()) != p) return false;
    for (int a = 0; a < p; ++a)
        if (emb[a] >= family.size()) return false;
    for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
            if (a == b) continue;
            const SubsetMask fa = family[emb[a]], fb = family[emb[b]];
            if (fa == fb) return false;
            if (poset.color(a) == poset.color(b) && fa.size() != fb.size()) return false;
            if (poset.less(a, b) && !fa.proper_subset_of(fb)) return false;
            if (mode == EmbedMode::induced && fa.subset_of(fb) && !poset.less(a, b)) return false;
        }
    }
    return true;
}

namespace detail {

class Embedder {
public:
    Embedder(const Family& family, const ColoredPoset& poset, EmbedMode mode, std::span<const Pin> pins, bool break_twins)
        : family_(family), poset_(poset), mode_(mode), p_(poset.size()), image_(p_, kUnset), used_(family.size(), 0),
          pinned_(p_, kUnset) {
        for (const Pin& pin : pins) {
            if (pin.element < 0 || pin.element >= p_) throw ArgumentError("pin references a missing poset element");
            if (pin.member >= family.size()) throw ArgumentError("pin references a missing family member");
            if (pinned_[pin.element] != kUnset && pinned_[pin.element] != pin.member)
                throw ArgumentError("element pinned twice to different sets");
            pinned_[pin.element] = pin.member;
        }
        for (int a = 0; a < p_; ++a) {
            if (pinned_[a] == kUnset) continue;
            for (int b = a + 1; b < p_; ++b) {
                if (pinned_[b] == kUnset) continue;
                if (pinned_[a] == pinned_[b]) throw ArgumentError("pins are not injective");
                if (poset.color(a) == poset.color(b) && family[pinned_[a]].size() != family[pinned_[b]].size())
                    throw ArgumentError("pins give one color two different set sizes");
            }
        }

        order_.resize(p_);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return poset.color(a) < poset.color(b); });

        twin_prev_.assign(p_, -1);
        if (break_twins) {
            for (int i = 0; i < p_; ++i) {
                const int a = order_[i];
                if (pinned_[a] != kUnset) continue;
                for (int j = i - 1; j >= 0; --j) {
                    const int b = order_[j];
                    if (poset.color(b) != poset.color(a)) break;
                    if (pinned_[b] != kUnset) continue;
                    if (poset.above(a) == poset.above(b) && poset.below(a) == poset.below(b)) {
                        twin_prev_[a] = b;
                        break;
                    }
                }
            }
        }
        for (int a = 0; a < p_; ++a)
            if (pinned_[a] != kUnset) used_[pinned_[a]] = 1;
        below_.resize(p_);
        for (int a = 0; a < p_; ++a) below_[a] = poset.below(a);
    }

    std::optional<Embedding> find() {
        count_mode_ = false;
        if (search(0, -1)) return image_;
        return std::nullopt;
    }

    std::uint64_t count() {
        count_mode_ = true;
        found_ = 0;
        search(0, -1);
        return found_;
    }

private:
    static constexpr std::uint32_t kUnset = 0xffffffffU;

    // Returns true to stop (found, in find mode).
    bool search(int pos, int color_size) {
        if (pos == p_) {
            if (count_mode_) {
                ++found_;
                return false;
            }
            return true;
        }
        const int e = order_[pos];
        const bool new_color = pos == 0 || poset_.color(order_[pos - 1]) != poset_.color(e);
        if (new_color) {
            int fixed = -1;
            int class_size = 0;
            for (int q = pos; q < p_ && poset_.color(order_[q]) == poset_.color(e); ++q) {
                ++class_size;
                if (pinned_[order_[q]] != kUnset) fixed = family_[pinned_[order_[q]]].size();
            }
            int lo = 0;
            for (int q = 0; q < pos; ++q) {
                const int x = order_[q];
                for (int r = pos; r < pos + class_size; ++r)
                    if (poset_.less(x, order_[r])) lo = std::max(lo, family_[image_[x]].size() + 1);
            }
            for (int s = lo; s <= family_.n(); ++s) {
                if (fixed >= 0 && s != fixed) continue;
                if (static_cast<int>(family_.of_size(s).size()) < class_size) continue;
                if (place(pos, e, s)) return true;
            }
            return false;
        }
        return place(pos, e, color_size);
    }

    bool place(int pos, int e, int s) {
        std::uint64_t required = 0;
        for (std::uint64_t m = below_[e]; m != 0; m &= m - 1) required |= family_[image_[std::countr_zero(m)]].bits;
        const std::uint32_t min_index = twin_prev_[e] >= 0 ? image_[twin_prev_[e]] + 1 : 0;

        auto try_member = [&](std::uint32_t idx) {
            const SubsetMask cand = family_[idx];
            if ((required & ~cand.bits) != 0) return false;
            if (mode_ == EmbedMode::induced && !induced_ok(pos, e, cand)) return false;
            image_[e] = idx;
            used_[idx] = 1;
            if (successors_feasible(e) && search(pos + 1, s)) return true;  // keep the image for the caller
            used_[idx] = 0;
            image_[e] = kUnset;
            return false;
        };

        if (pinned_[e] != kUnset) {
            const std::uint32_t idx = pinned_[e];
            if (family_[idx].size() != s) return false;
            used_[idx] = 0;
            const bool stop = try_member(idx);
            used_[idx] = 1;
            return stop;
        }
        for (std::uint32_t idx : family_.of_size(s)) {
            if (used_[idx] || idx < min_index) continue;
            if (try_member(idx)) return true;
        }
        return false;
    }

    // Forward check after placing `e`: every unplaced element above it still has
    // some member containing the images of its placed predecessors, with a larger size.
    bool successors_feasible(int e) const {
        for (std::uint64_t m = poset_.above(e); m != 0; m &= m - 1) {
            const int y = std::countr_zero(m);
            if (image_[y] != kUnset) continue;
            std::uint64_t required = 0;
            int min_size = 0;
            for (std::uint64_t b = below_[y]; b != 0; b &= b - 1) {
                const std::uint32_t img = image_[std::countr_zero(b)];
                if (img == kUnset) continue;
                required |= family_[img].bits;
                min_size = std::max(min_size, family_[img].size() + 1);
            }
            if (pinned_[y] != kUnset) {
                const SubsetMask t = family_[pinned_[y]];
                if ((required & ~t.bits) != 0 || t.size() < min_size) return false;
                continue;
            }
            bool found = false;
            for (int s = min_size; s <= family_.n() && !found; ++s)
                for (std::uint32_t idx : family_.of_size(s))
                    if ((required & ~family_[idx].bits) == 0) {
                        found = true;
                        break;
                    }
            if (!found) return false;
        }
        return true;
    }

    bool induced_ok(int pos, int e, SubsetMask cand) const {
        for (int q = 0; q < pos; ++q) {
            const int x = order_[q];
            const SubsetMask fx = family_[image_[x]];
            if (fx.subset_of(cand) != poset_.less(x, e)) return false;
            if (cand.subset_of(fx) != poset_.less(e, x)) return false;
        }
        return true;
    }

    const Family& family_;
    const ColoredPoset& poset_;
    EmbedMode mode_;
    int p_;
    std::vector<int> order_;
    std::vector<int> twin_prev_;
    std::vector<std::uint64_t> below_;
    Embedding image_;
    std::vector<char> used_;
    std::vector<std::uint32_t> pinned_;
    bool count_mode_ = false;
    std::uint64_t found_ = 0;
};

} // namespace detail

/// Finds an embedding extending `pins`, or nullopt. The witness is re-verified before it is returned.
inline std::optional<Embedding> find_embedding(const Family& family, const ColoredPoset& poset, EmbedMode mode = EmbedMode::standard,
                                               std::span<const Pin> pins = {}) {
    if (static_cast<std::size_t>(poset.size()) > family.size()) {
        // Still validate pins so misuse is reported consistently.
        detail::Embedder check(family, poset, mode, pins, false);
        return std::nullopt;
    }
    detail::Embedder embedder(family, poset, mode, pins, true);
    auto emb = embedder.find();
    if (emb && !verify_embedding(family, poset, mode, *emb))
        throw std::logic_error("detector produced an embedding that fails verification");
    return emb;
}

/// A witness for the first member of `configs` that embeds, if any.
struct ConfigHit {
    std::size_t config_index;
    Embedding embedding;
};

inline std::optional<ConfigHit> find_any_embedding(const Family& family, const ConfigSet& configs, EmbedMode mode = EmbedMode::standard) {
    for (std::size_t i = 0; i < configs.size(); ++i)
        if (auto emb = find_embedding(family, configs[i], mode)) return ConfigHit{i, std::move(*emb)};
    return std::nullopt;
}

inline bool is_avoiding(const Family& family, const ConfigSet& configs, EmbedMode mode = EmbedMode::standard) {
    return !find_any_embedding(family, configs, mode).has_value();
}

/// True iff some member of `configs` embeds into family + {new_set} with new_set in the image.
/// Skips the precondition checks; callers guarantee that `family` avoids `configs`
/// and does not contain `new_set`.
inline bool violates_on_add_unchecked(const Family& extended, std::uint32_t new_index, const ConfigSet& configs, EmbedMode mode) {
    const int new_size = extended[new_index].size();
    for (const auto& poset : configs) {
        if (static_cast<std::size_t>(poset.size()) > extended.size()) continue;
        std::vector<char> tried(poset.size(), 0);
        for (int e = 0; e < poset.size(); ++e) {
            if (tried[e]) continue;
            // Elements with identical color and neighbourhoods give the same answer.
            for (int f = e; f < poset.size(); ++f)
                if (poset.color(f) == poset.color(e) && poset.above(f) == poset.above(e) && poset.below(f) == poset.below(e)) tried[f] = 1;
            if (static_cast<int>(extended.of_size(new_size).size()) < static_cast<int>(poset.class_sizes()[poset.color(e) - 1])) continue;
            const Pin pin{e, new_index};
            if (find_embedding(extended, poset, mode, std::span<const Pin>(&pin, 1))) return true;
        }
    }
    return false;
}

/// True iff family + {new_set} contains an embedding of some member of `configs`.
/// Requires that `family` avoids `configs` and lacks `new_set`; throws ArgumentError otherwise.
inline bool violates_on_add(const Family& family, SubsetMask new_set, const ConfigSet& configs, EmbedMode mode = EmbedMode::standard) {
    if (family.contains(new_set)) throw ArgumentError("violates_on_add: set already in family");
    if (!new_set.fits(family.ground())) throw ArgumentError("violates_on_add: set outside the ground set");
    if (!is_avoiding(family, configs, mode)) throw ArgumentError("violates_on_add: family already contains a forbidden configuration");
    const Family extended = family.with(new_set);
    return violates_on_add_unchecked(extended, static_cast<std::uint32_t>(extended.size() - 1), configs, mode);
}

inline constexpr std::size_t kCountFamilyLimit = 4096;
inline constexpr int kCountPosetLimit = 8;

/// Exact number of embeddings. Guarded to |family| <= 4096 and at most 8 poset elements.
inline BigInt count_embeddings(const Family& family, const ColoredPoset& poset, EmbedMode mode = EmbedMode::standard) {
    if (family.size() > kCountFamilyLimit || poset.size() > kCountPosetLimit)
        throw RangeError("count_embeddings: limited to families of at most 4096 sets and posets of at most 8 elements");
    detail::Embedder embedder(family, poset, mode, {}, false);
    return BigInt(embedder.count());
}

} // namespace fsp
