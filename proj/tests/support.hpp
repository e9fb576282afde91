#pragma once

// Shared fixtures: the two worked scenarios as programmatic builders, exact
// literals, and a couple of small helpers used across the suites.

#include "lpsim/scenario.hpp"
#include "lpsim/semantics.hpp"

#include <string>

namespace lpsim::test {

inline Rat rat(const std::string& text) { return *parse_rational(text); }

inline TokenId tok(const std::string& name) { return TokenId(name); }
inline AddressId addr(const std::string& name) { return AddressId(name); }

// Protocol of the two-user worked example: T = 2/3, R = 1.1, constant 12%.
inline ProtocolParams demo_params() {
    return ProtocolParams::make(Rat(2, 3), Rat(11, 10),
                                InterestRateModel(LinearUtilizationRate{Rat(0), Rat(3, 25)}));
}

inline BlockchainState demo_initial() {
    return initial_state({{addr("A"), Rat(100), tok("T0")}, {addr("B"), Rat(50), tok("T1")}},
                         {{tok("T0"), Rat(1)}, {tok("T1"), Rat(1)}})
        .value();
}

inline Trace demo_trace() {
    return {
        Deposit{addr("A"), Rat(50), tok("T0")},
        Deposit{addr("B"), Rat(50), tok("T1")},
        Borrow{addr("B"), Rat(30), tok("T0")},
        AccrueInterest{},
        Repay{addr("B"), Rat(5), tok("T0")},
        PriceUpdate{rat("0.3"), tok("T0")},
        Liquidate{addr("A"), addr("B"), Rat(11), tok("T0"), tok("T1")},
        Redeem{addr("A"), Rat(10), tok("T0")},
    };
}

// State after the first `steps` transactions of the demo trace.
inline BlockchainState demo_after(size_t steps) {
    Trace full = demo_trace();
    Trace trace(full.begin(), full.begin() + static_cast<long>(steps));
    return apply_trace(demo_params(), demo_initial(), trace, TraceMode::Strict)
        .value()
        .final_state;
}

// The borrower-health example: T = 2/3, R = 1.3, constant 50% interest.
inline ProtocolParams hf_params() {
    return ProtocolParams::make(Rat(2, 3), Rat(13, 10),
                                InterestRateModel(LinearUtilizationRate{Rat(0), Rat(1, 2)}));
}

inline BlockchainState hf_initial() {
    return initial_state({{addr("A"), Rat(100), tok("T")}, {addr("B"), Rat(50), tok("T")}},
                         {{tok("T"), Rat(1)}})
        .value();
}

inline Trace hf_trace_x() {
    return {
        Deposit{addr("B"), Rat(50), tok("T")},
        Borrow{addr("B"), Rat(30), tok("T")},
        AccrueInterest{},
        Liquidate{addr("A"), addr("B"), Rat(10), tok("T"), tok("T")},
    };
}

inline Trace hf_trace_y() {
    Trace trace = hf_trace_x();
    trace.insert(trace.begin(), Deposit{addr("A"), Rat(90), tok("T")});
    return trace;
}

inline std::string scenario_path(const std::string& name) {
    return std::string(SCENARIO_DIR) + "/" + name;
}

}  // namespace lpsim::test
