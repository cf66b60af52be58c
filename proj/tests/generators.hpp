#pragma once

// Random compact kernels and bounded piecewise signals shared by the
// property suites and the acceptance run.

#include "oracles.hpp"

#include <skop/kernel.hpp>
#include <skop/signal.hpp>

#include <vector>

namespace gen {

inline skop::KernelPtr random_compact_kernel(oracle::Rng& rng) {
    using skop::KernelSpec;
    switch (rng.integer(0, 5)) {
        case 0: return skop::make_kernel(KernelSpec::bspline(1 + (int)rng.integer(0, 3)));
        case 1:
            return skop::make_kernel(KernelSpec::compound_bspline(
                1 + (int)rng.integer(0, 2), rng.uniform(-0.25, 1.25)));
        case 2: return skop::make_kernel(KernelSpec::c2());
        case 3: return skop::make_kernel(KernelSpec::d2());
        case 4: return skop::make_kernel(KernelSpec::bspline(2, 3.0));
        default: return skop::make_kernel(KernelSpec::bspline(3));
    }
}

inline skop::Signal random_signal(oracle::Rng& rng,
                                  std::vector<double>* breakpoints_out = nullptr) {
    using namespace skop;
    const int nb = (int)rng.integer(1, 3);
    std::vector<double> bps;
    double b = rng.uniform(-3.0, -1.0);
    for (int i = 0; i < nb; ++i) {
        bps.push_back(b);
        b += rng.uniform(0.4, 2.0);
    }
    std::vector<Piece> pieces;
    for (int i = 0; i <= nb; ++i) {
        switch (rng.integer(0, 2)) {
            case 0:
                pieces.push_back(Polynomial{rng.uniform(-2, 2), rng.uniform(-1.5, 1.5),
                                            rng.uniform(-0.5, 0.5)});
                break;
            case 1:
                pieces.push_back(Sinusoid{rng.uniform(-2, 2), rng.uniform(0.3, 3.0),
                                          rng.uniform(0, 6), rng.uniform(-1, 1)});
                break;
            default: pieces.push_back(Polynomial{rng.uniform(-2, 2)});
        }
    }
    pieces.front() = Polynomial{rng.uniform(-2, 2)}; // bounded outer pieces
    if (breakpoints_out) *breakpoints_out = bps;
    return Signal::piecewise(std::move(bps), std::move(pieces));
}

} // namespace gen
