#ifndef METARANK_VINEYARD_HPP
#define METARANK_VINEYARD_HPP

#include <array>
#include <string>
#include <vector>

#include "metarank/bifiltration.hpp"
#include "metarank/error.hpp"
#include "metarank/reduction.hpp"

namespace metarank {

/// How the path filtration changes when the staircase is pushed through
/// one unit square.
struct SquareChange
{
    enum class Kind { no_change, arrival_shift, transposition };

    Kind kind = Kind::no_change;
    int simplex = -1;  ///< the shifted simplex (arrival_shift)
    int direction = 0; ///< -1 arrives earlier, +1 arrives later
    int position = 0;  ///< transposition swaps position and position+1;
                       ///< for a shift, the position before the move
    int earlier = -1;  ///< simplex at `position` before a transposition
    int later = -1;    ///< simplex at `position + 1` before a transposition

    friend bool operator==(const SquareChange&, const SquareChange&) = default;
};

/// Classifies the push through the square with upper-left corner (i, j) and
/// lower-right corner (i+1, j-1); 1 <= i <= n-1, 2 <= j <= n.
inline SquareChange classify_square(const GradedComplex& c, int i, int j)
{
    SquareChange out;
    const int sigma = c.simplex_at_x(i + 1); // arrives at (i+1, j) or later
    const int tau = c.simplex_at_y(j);       // arrives at (i, j) if x <= i
    const int p = i + j - 1;
    if (sigma == tau)
        return out;
    const bool sigma_moves = c.ygrade(sigma) <= j - 1;
    const bool tau_moves = c.xgrade(tau) <= i;
    if (sigma_moves && tau_moves) {
        out.kind = SquareChange::Kind::transposition;
        out.position = p;
        out.earlier = tau;
        out.later = sigma;
    } else if (sigma_moves) {
        out.kind = SquareChange::Kind::arrival_shift;
        out.simplex = sigma;
        out.direction = -1;
        out.position = p + 1;
    } else if (tau_moves) {
        out.kind = SquareChange::Kind::arrival_shift;
        out.simplex = tau;
        out.direction = +1;
        out.position = p;
    }
    return out;
}

/// Counters for the per-column monotonicity checks on interval endpoints.
struct MonotonicityReport
{
    long long death_reincreased = 0;
    long long birth_redecreased = 0;
    long long transpositions = 0;
    long long pairing_switches = 0;
    long long shifts = 0;

    bool clean() const { return death_reincreased == 0 && birth_redecreased == 0; }
};

/// Mutable sweep state: the RU decomposition of the current path
/// filtration, arrival positions, and the slot-stable interval list.
class VineyardState
{
public:
    /// Reduces the filtration along the top-left path (column 1).
    explicit VineyardState(const GradedComplex& complex, bool check_invariants = false)
        : complex_(&complex), check_(check_invariants)
    {
        const int n = complex.size();
        arrival_.resize(n);
        std::vector<int> order;
        order.reserve(n);
        for (const auto& a : filtration_along_path(complex, 1)) {
            arrival_[a.simplex] = a.position;
            order.push_back(a.simplex);
        }
        auto boundary = boundary_matrix(complex, order);
        ru_ = ru_decompose(boundary, std::move(order));
        pairs_ = extract_pairs(ru_, arrival_, complex);
        slot_of_.assign(n, -1);
        for (const auto& iv : pairs_.entries) {
            slot_of_[iv.birth_simplex] = iv.slot;
            if (iv.death_simplex >= 0)
                slot_of_[iv.death_simplex] = iv.slot;
        }
        death_dropped_.assign(pairs_.size(), 0);
        birth_raised_.assign(pairs_.size(), 0);
        if (check_)
            ru_.check();
    }

    int column() const { return column_; }
    const RUDecomposition& ru() const { return ru_; }
    const PairingList& pairs() const { return pairs_; }
    const std::vector<int>& arrivals() const { return arrival_; }
    const MonotonicityReport& monotonicity() const { return report_; }

    /// Interval values are kept in slot order.
    const Interval& interval(int slot) const { return pairs_.entries[slot]; }

    /// Applies one square; returns true when the pairing function changed.
    bool apply(const SquareChange& change)
    {
        switch (change.kind) {
        case SquareChange::Kind::no_change:
            return false;
        case SquareChange::Kind::arrival_shift:
            shift(change);
            return false;
        case SquareChange::Kind::transposition:
            return transpose_update(change);
        }
        return false;
    }

    /// Moves the path from column i to column i+1, squares j = n down to 2.
    void sweep_column()
    {
        const int n = complex_->size();
        if (column_ >= n)
            throw InternalError("sweep past the last column");
        std::fill(death_dropped_.begin(), death_dropped_.end(), 0);
        std::fill(birth_raised_.begin(), birth_raised_.end(), 0);
        for (int j = n; j >= 2; --j) {
            apply(classify_square(*complex_, column_, j));
            if (check_)
                ru_.check();
        }
        ++column_;
    }

    /// Swaps the two simplices named by a transposition change.
    bool transpose_update(const SquareChange& change)
    {
        const int early = change.earlier, late = change.later;
        const int pos = ru_.position_of(early);
        if (ru_.position_of(late) != pos + 1 || arrival_[early] != change.position ||
            arrival_[late] != change.position + 1)
            throw InternalError("transposition does not match current filtration");
        ++report_.transpositions;

        const int slot_a = slot_of_[early];
        const int slot_b = slot_of_[late];
        const Interval old_a = pairs_.entries[slot_a];
        const Interval old_b = pairs_.entries[slot_b];

        ru_.transpose(pos);
        std::swap(arrival_[early], arrival_[late]);

        // New pairs of the two moved simplices, as (birth, death) simplices.
        auto pair_of = [&](int simplex) {
            const int p = ru_.position_of(simplex);
            const int q = ru_.partner(p);
            const int other = q >= 0 ? ru_.simplex_at(q) : -1;
            if (ru_.is_negative(p))
                return std::array<int, 2>{other, simplex};
            return std::array<int, 2>{simplex, other};
        };
        const auto pe = pair_of(early);
        const auto pl = pair_of(late);

        auto same_pair = [](const Interval& iv, const std::array<int, 2>& p) {
            return iv.birth_simplex == p[0] && iv.death_simplex == p[1];
        };
        const bool unchanged = (same_pair(old_a, pe) || same_pair(old_a, pl)) &&
                               (same_pair(old_b, pe) || same_pair(old_b, pl));

        if (unchanged) {
            refresh(slot_a);
            refresh(slot_b);
            track(old_a, pairs_.entries[slot_a], true);
            track(old_b, pairs_.entries[slot_b], true);
            return false;
        }

        // Pairing switched: each slot keeps its interval value and takes
        // the new pair realising that value.
        ++report_.pairing_switches;
        for (int slot : {slot_a, slot_b}) {
            Interval& iv = pairs_.entries[slot];
            const Interval before = iv;
            bool placed = false;
            for (const auto& p : {pe, pl}) {
                const int b = arrival_[p[0]];
                const int d = p[1] >= 0 ? arrival_[p[1]] : implicit_death;
                if (b == before.birth && d == before.death) {
                    iv.birth_simplex = p[0];
                    iv.death_simplex = p[1];
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw InternalError("pairing switch changed interval values");
            if (complex_->dimension(iv.birth_simplex) != iv.dim)
                throw InternalError("pairing switch changed homology dimension");
            slot_of_[iv.birth_simplex] = slot;
            if (iv.death_simplex >= 0)
                slot_of_[iv.death_simplex] = slot;
        }
        return true;
    }

private:
    void shift(const SquareChange& change)
    {
        const int s = change.simplex;
        if (arrival_[s] != change.position)
            throw InternalError("arrival shift does not match current filtration");
        ++report_.shifts;
        arrival_[s] += change.direction;
        const int slot = slot_of_[s];
        const Interval before = pairs_.entries[slot];
        refresh(slot);
        track(before, pairs_.entries[slot], false);
    }

    void refresh(int slot)
    {
        Interval& iv = pairs_.entries[slot];
        iv.birth = arrival_[iv.birth_simplex];
        iv.death = iv.death_simplex >= 0 ? arrival_[iv.death_simplex] : implicit_death;
    }

    // Once a transposition pulls a death earlier, that death must not move
    // later again in this column; likewise a birth pushed later must not
    // move earlier again.
    void track(const Interval& before, const Interval& after, bool by_transposition)
    {
        const int slot = after.slot;
        if (after.death > before.death && death_dropped_[slot])
            ++report_.death_reincreased;
        if (after.birth < before.birth && birth_raised_[slot])
            ++report_.birth_redecreased;
        if (by_transposition) {
            if (after.death < before.death)
                death_dropped_[slot] = 1;
            if (after.birth > before.birth)
                birth_raised_[slot] = 1;
        }
    }

    const GradedComplex* complex_;
    bool check_;
    int column_ = 1;
    RUDecomposition ru_;
    PairingList pairs_;
    std::vector<int> arrival_;
    std::vector<int> slot_of_;
    std::vector<char> death_dropped_;
    std::vector<char> birth_raised_;
    MonotonicityReport report_;
};

} // namespace metarank

#endif
