#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "friedland/orbit_space.hpp"

namespace friedland::kernels {

// Pair predicates over flat candidate rows. Shifted distances are evaluated
// with early exit: terms are nonnegative, so a partial sum over the threshold
// already decides separation.

// True iff no shift s < n has truncated distance value > eps + tail(depth-s):
// the pair cannot be certified separated.
bool pair_not_separated(const CandidateSet& cs, std::size_t a, std::size_t b, int n, double eps);

// True iff every shift s < n has value + tail <= eps: the pair is certified
// within eps up to time n.
bool pair_covers(const CandidateSet& cs, std::size_t a, std::size_t b, int n, double eps);

// Greedy insertion in index order; kept indices returned in insertion order.
// The reference kernel scans all kept rows directly. The fast kernel prunes
// with a wraparound bucket grid on x_0 (bucket side eps/4) plus coordinate
// filters on the next two orbit entries, and can parallelize the blocker
// scan; it keeps exactly the reference result.
std::vector<std::uint32_t> greedy_separated_reference(const CandidateSet& cs,
                                                      const std::vector<std::uint32_t>& order,
                                                      int n, double eps);
std::vector<std::uint32_t> greedy_separated_fast(const CandidateSet& cs,
                                                 const std::vector<std::uint32_t>& order, int n,
                                                 double eps, bool parallel);

std::vector<std::uint32_t> greedy_spanning_reference(const CandidateSet& cs,
                                                     const std::vector<std::uint32_t>& order,
                                                     int n, double eps);
std::vector<std::uint32_t> greedy_spanning_fast(const CandidateSet& cs,
                                                const std::vector<std::uint32_t>& order, int n,
                                                double eps, bool parallel);

// Lexicographic (itinerary, x0 coordinates) candidate order.
std::vector<std::uint32_t> lexicographic_order(const CandidateSet& cs);

}  // namespace friedland::kernels
