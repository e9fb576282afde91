#pragma once

#include "lpsim/semantics.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace lpsim {

// Seeded generator of enabled traces. Transaction parameters are rejection
// sampled within exact feasibility bounds, so generated steps are enabled at
// their position by construction (each candidate is still verified by apply;
// after 64 failed draws the step falls back to an accrual, which is always
// enabled). The same seed always yields the same trace.

struct FuzzWeights {
    // Indexed by TxKind order: dep, bor, rep, rdm, liq, int, px, swp.
    std::array<uint32_t, 8> by_kind{20, 14, 12, 10, 8, 10, 16, 10};
};

struct FuzzConfig {
    uint64_t seed = 0;
    size_t users = 3;
    size_t tokens = 2;
    size_t steps = 40;
    long initial_balance_min = 0;     // per (user, token), integer units
    long initial_balance_max = 1000;
    long max_denominator = 10000;     // bound on sampled amount denominators
    // Soft cap on accrual draws per trace. Every accrual roughly squares the
    // denominator bit-length of outstanding debts, so unbounded accruals make
    // exact arithmetic on long traces intractable. Retry exhaustion may still
    // emit an accrual past the cap (it is the only always-enabled fallback).
    size_t max_accruals = 8;
    FuzzWeights weights;
    // By default protocol parameters are drawn from the seed as well; suites
    // that need a fixed economy (say alpha = 0) pin them here.
    std::optional<ProtocolParams> params_override;

    void validate() const;  // throws std::invalid_argument
};

struct FuzzResult {
    ProtocolParams params;
    BlockchainState initial;
    Trace trace;
};

// Also draws protocol parameters (threshold, reward, linear rate) from the
// seed, so differential suites see varied economies.
FuzzResult generate_trace(const FuzzConfig& config);

// Uniform helpers with pinned semantics (std::uniform_int_distribution is
// implementation-defined, which would break golden-trace tests).
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

// Random rational in (0, hi] with denominator <= max_denominator whenever
// floor(hi * max_denominator) >= 1, else a fixed fraction of hi.
Rat sample_amount(std::mt19937_64& rng, const Rat& hi, long max_denominator);

}  // namespace lpsim
