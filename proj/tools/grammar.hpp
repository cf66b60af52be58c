#pragma once

// Textual spec grammars for the command line:
//   kernels:  name:key=value,key=value
//             fejer | vallee-poussin | mixed-sinc | c2 | steps | d2
//             bspline:n=3[,shift=1.5]      bspline-shift:n=2   (M_n(x-n-1))
//             compound-bspline:n=2,alpha=0.3
//             sigmoidal-phi:gamma=1.5
//             compound:a=bspline(n=2),b=bspline(n=3),alpha=0.25
//             mix:w1=0.5,k1=bspline(n=2),off1=-1,w2=...,k2=...,off2=...
//   signals:  sin[:amplitude=1,frequency=1,phase=0][,at=T,value=V]
//             constant:c=3 | heaviside:t=1 | step:t=1,left=0,right=2
//             ramp | poly:c0=..,c1=.. | csv:PATH

#include <skop/kernel.hpp>
#include <skop/signal.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace skop::cli {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("trailing junk in " + what + ": '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError("cannot parse " + what + ": '" + s + "'");
    }
}

inline int to_int(const std::string& s, const std::string& what) {
    const double v = to_double(s, what);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ParseError(what + " must be an integer: '" + s + "'");
    return i;
}

// split on ',' at paren depth zero
inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    if (depth != 0) throw ParseError("unbalanced parentheses in '" + s + "'");
    return out;
}

inline std::map<std::string, std::string> key_values(const std::string& s) {
    std::map<std::string, std::string> kv;
    if (s.empty()) return kv;
    for (const auto& item : split_args(s)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

KernelSpec parse_kernel_spec(const std::string& text);

// "name(args)" -> "name:args" for nested kernel specs
inline KernelSpec parse_nested_kernel(const std::string& text) {
    const auto open = text.find('(');
    if (open == std::string::npos) return parse_kernel_spec(text);
    if (text.back() != ')') throw ParseError("malformed nested kernel '" + text + "'");
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    return parse_kernel_spec(text.substr(0, open) + (inner.empty() ? "" : ":" + inner));
}

inline KernelSpec parse_kernel_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    auto kv = key_values(colon == std::string::npos ? "" : text.substr(colon + 1));

    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("kernel '" + name + "' needs " + key + "=");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_or = [&](const char* key, const std::string& fallback) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto done = [&](KernelSpec spec) {
        const double shift = to_double(take_or("shift", "0"), "shift");
        if (!kv.empty()) throw ParseError("unknown key '" + kv.begin()->first + "' for " + name);
        spec.shift += shift;
        return spec;
    };

    if (name == "fejer") return done(KernelSpec::fejer());
    if (name == "vallee-poussin") return done(KernelSpec::vallee_poussin());
    if (name == "mixed-sinc") return done(KernelSpec::mixed_sinc());
    if (name == "c2") return done(KernelSpec::c2());
    if (name == "steps") return done(KernelSpec::step_s());
    if (name == "d2") return done(KernelSpec::d2());
    if (name == "bspline") return done(KernelSpec::bspline(to_int(take("n"), "n")));
    if (name == "bspline-shift") {
        const int n = to_int(take("n"), "n");
        return done(KernelSpec::bspline(n, n + 1.0));
    }
    if (name == "compound-bspline")
        return done(KernelSpec::compound_bspline(to_int(take("n"), "n"),
                                                 to_double(take("alpha"), "alpha")));
    if (name == "sigmoidal-phi")
        return done(KernelSpec::sigmoidal_phi(to_double(take("gamma"), "gamma")));
    if (name == "compound") {
        const auto a = parse_nested_kernel(take("a"));
        const auto b = parse_nested_kernel(take("b"));
        return done(KernelSpec::compound(a, b, to_double(take("alpha"), "alpha")));
    }
    if (name == "mix") {
        std::vector<KernelSpec::MixTerm> terms;
        for (int i = 1;; ++i) {
            const std::string suffix = std::to_string(i);
            auto wit = kv.find("w" + suffix);
            if (wit == kv.end()) break;
            KernelSpec::MixTerm term;
            term.weight = to_double(wit->second, "w" + suffix);
            kv.erase(wit);
            term.inner =
                std::make_shared<KernelSpec>(parse_nested_kernel(take(("k" + suffix).c_str())));
            term.offset = to_double(take_or(("off" + suffix).c_str(), "0"), "off" + suffix);
            terms.push_back(std::move(term));
        }
        if (terms.empty()) throw ParseError("mix needs w1=,k1=,...");
        return done(KernelSpec::mix(std::move(terms)));
    }
    throw ParseError("unknown kernel '" + name + "'");
}

inline Signal parse_signal_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (name == "csv") {
        std::ifstream in(rest);
        if (!in) throw ParseError("cannot open signal file '" + rest + "'");
        std::vector<double> ts, vs;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw ParseError("signal csv needs t,value rows");
            try {
                const double t = std::stod(line.substr(0, comma));
                const double v = std::stod(line.substr(comma + 1));
                ts.push_back(t);
                vs.push_back(v);
            } catch (...) {
                if (ts.empty()) continue; // header row
                throw ParseError("bad signal csv row: '" + line + "'");
            }
        }
        if (ts.empty()) throw ParseError("signal csv has no samples");
        return Signal::sampled(ts, vs);
    }

    auto kv = key_values(rest);
    auto take_or = [&](const char* key, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const double v = to_double(it->second, key);
        kv.erase(it);
        return v;
    };
    auto finish = [&](Signal s) {
        auto at = kv.find("at");
        if (at != kv.end()) {
            const double t = to_double(at->second, "at");
            kv.erase(at);
            auto val = kv.find("value");
            if (val == kv.end()) throw ParseError("'at=' needs 'value='");
            s = s.with_point_value(t, to_double(val->second, "value"));
            kv.erase(val);
        }
        if (!kv.empty())
            throw ParseError("unknown key '" + kv.begin()->first + "' for signal " + name);
        return s;
    };

    if (name == "sin")
        return finish(Signal::sine(take_or("amplitude", 1.0), take_or("frequency", 1.0),
                                   take_or("phase", 0.0)));
    if (name == "constant") return finish(Signal::constant(take_or("c", 0.0)));
    if (name == "heaviside") return finish(Signal::heaviside(take_or("t", 0.0)));
    if (name == "step")
        return finish(
            Signal::step(take_or("t", 0.0), take_or("left", 0.0), take_or("right", 1.0)));
    if (name == "ramp") return finish(Signal::clamped_ramp());
    if (name == "poly") {
        Polynomial coeffs;
        for (int i = 0;; ++i) {
            auto it = kv.find("c" + std::to_string(i));
            if (it == kv.end()) break;
            coeffs.push_back(to_double(it->second, "c" + std::to_string(i)));
            kv.erase(it);
        }
        if (coeffs.empty()) throw ParseError("poly needs c0=,c1=,...");
        return finish(Signal::polynomial(std::move(coeffs)));
    }
    throw ParseError("unknown signal '" + name + "'");
}

// "lo:hi:n" -> n equispaced points including both ends
inline std::vector<double> parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = text.rfind(':');
    if (a == std::string::npos || b == a) throw ParseError("grid needs lo:hi:n");
    const double lo = to_double(text.substr(0, a), "grid lo");
    const double hi = to_double(text.substr(a + 1, b - a - 1), "grid hi");
    const int n = to_int(text.substr(b + 1), "grid n");
    if (n < 2 || hi <= lo) throw ParseError("grid needs hi > lo and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

// "lo:hi:factor" -> geometric ladder
inline std::vector<double> parse_ladder(const std::string& text) {
    const auto a = text.find(':');
    const auto b = text.rfind(':');
    if (a == std::string::npos || b == a) throw ParseError("w-ladder needs lo:hi:factor");
    const double lo = to_double(text.substr(0, a), "ladder lo");
    const double hi = to_double(text.substr(a + 1, b - a - 1), "ladder hi");
    const double f = to_double(text.substr(b + 1), "ladder factor");
    if (!(lo > 0.0) || hi < lo || !(f > 1.0))
        throw ParseError("w-ladder needs 0 < lo <= hi and factor > 1");
    std::vector<double> ws;
    for (double w = lo; w <= hi * (1.0 + 1e-12); w *= f) ws.push_back(w);
    return ws;
}

// smallest q <= qmax with q*t within eps of an integer (continued fractions)
inline long long rational_denominator(double t, long long qmax = 1'000'000,
                                      double eps = 1e-9) {
    double x = std::abs(t);
    long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64 && q1 <= qmax; ++it) {
        const double scaled = static_cast<double>(q1) * std::abs(t);
        if (std::abs(scaled - std::round(scaled)) <= eps * std::max(1.0, scaled)) return q1;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
        const double a = std::floor(x);
        frac = x - a;
        const long long p2 = static_cast<long long>(a) * p1 + p0;
        const long long q2 = static_cast<long long>(a) * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    throw ParseError("integer mode needs rational t (no denominator <= 1e6 found)");
}

} // namespace skop::cli
