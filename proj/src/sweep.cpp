#include "hlab/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <thread>

#include "hlab/errors.hpp"

namespace hlab {

double SweepAxis::value(std::size_t i) const {
    if (steps <= 1) return lo;
    if (i + 1 == steps) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepAxis parse_range(const std::string& param, const std::string& range) {
    const auto bad = [&](const std::string& why) {
        return ValidationError("range '" + range + "' for '" + param + "': " + why);
    };
    const auto a = range.find(':');
    const auto b = a == std::string::npos ? a : range.find(':', a + 1);
    if (b == std::string::npos) throw bad("expected lo:hi:steps");
    auto number = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0' || !std::isfinite(v)) throw bad("'" + s + "' is not a finite number");
        return v;
    };
    SweepAxis axis;
    axis.param = param;
    axis.lo = number(range.substr(0, a));
    axis.hi = number(range.substr(a + 1, b - a - 1));
    const std::string steps = range.substr(b + 1);
    long long n = 0;
    const auto [ptr, ec] = std::from_chars(steps.data(), steps.data() + steps.size(), n);
    if (ec != std::errc() || ptr != steps.data() + steps.size()) throw bad("steps must be an integer");
    if (n <= 0) throw bad("steps must be positive");
    axis.steps = static_cast<std::size_t>(n);
    return axis;
}

std::size_t sweep_threads(std::size_t points) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HISTORIES_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = std::min(n, static_cast<std::size_t>(v));
    }
    return std::max<std::size_t>(1, std::min(n, points));
}

SweepRow sweep_row(const AnalysisReport& r, std::vector<double> params) {
    SweepRow row;
    row.params = std::move(params);
    if (!r.unify) throw ValidationError("scenario has no unification plan to sweep");
    const auto& u = *r.unify;
    // Every set other than the combined one is a pairwise set.
    row.pairwise_consistent = true;
    for (const auto& s : r.sets)
        if (!u.quasi || s.name != u.quasi->set) row.pairwise_consistent = row.pairwise_consistent && s.classicality.consistent;
    if (u.quasi) {
        if (const auto* s = r.find_set(u.quasi->set)) {
            row.combined_consistent = s->classicality.consistent;
            row.combined_linearly_positive = s->classicality.linearly_positive;
        }
    }
    if (u.chsh) {
        row.max_inequality_value = u.chsh->max_value;
        row.inequality_satisfied = u.chsh->satisfied;
    } else if (u.bell) {
        row.max_inequality_value = u.bell->max_value;
        row.inequality_satisfied = u.bell->satisfied;
    }
    if (u.verdict.status != FeasibilityStatus::not_evaluated) row.feasible = u.verdict.feasible();
    return row;
}

std::vector<SweepRow> run_sweep(const std::string& scenario, const std::vector<SweepAxis>& axes,
                                const std::map<std::string, double>& fixed, const AnalysisOptions& opts,
                                std::size_t threads) {
    if (scenario != "eprb" && scenario != "leggett_garg")
        throw ValidationError("sweep supports eprb and leggett_garg, not '" + scenario + "'");
    if (axes.empty()) throw ValidationError("sweep needs at least one --param/--range pair");
    std::size_t points = 1;
    for (const auto& a : axes) {
        if (a.steps == 0) throw ValidationError("range for '" + a.param + "' has zero steps");
        if (fixed.count(a.param)) throw ValidationError("parameter '" + a.param + "' is both fixed and swept");
        if (points > 10'000'000 / a.steps) throw ValidationError("sweep grid is too large");
        points *= a.steps;
    }
    for (std::size_t i = 0; i < axes.size(); ++i)
        for (std::size_t k = i + 1; k < axes.size(); ++k)
            if (axes[i].param == axes[k].param) throw ValidationError("parameter '" + axes[i].param + "' swept twice");
    AnalysisOptions o = opts;
    o.uniqueness = false;

    std::vector<SweepRow> rows(points);
    std::vector<std::exception_ptr> errors(points);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points; i = next++) {
            try {
                std::map<std::string, double> params = fixed;
                std::vector<double> values(axes.size());
                std::size_t rest = i;
                for (std::size_t k = axes.size(); k-- > 0;) {
                    values[k] = axes[k].value(rest % axes[k].steps);
                    rest /= axes[k].steps;
                }
                for (std::size_t k = 0; k < axes.size(); ++k) params[axes[k].param] = values[k];
                rows[i] = sweep_row(analyze(make_scenario(scenario, params), o), std::move(values));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = threads ? std::min(threads, points) : sweep_threads(points);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    // First failing grid point wins, independent of scheduling.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string sweep_csv(const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows) {
    std::string out;
    for (const auto& a : axes) out += a.param + ",";
    out += "pairwise_consistent,combined_consistent,combined_linearly_positive,max_inequality_value,"
           "inequality_satisfied,feasible\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        for (double p : r.params) out += num(p) + ",";
        out += std::string(r.pairwise_consistent ? "1" : "0") + "," + (r.combined_consistent ? "1" : "0") + "," +
               (r.combined_linearly_positive ? "1" : "0") + "," + num(r.max_inequality_value) + "," +
               (r.inequality_satisfied ? "1" : "0") + "," + (r.feasible ? (*r.feasible ? "1" : "0") : "") + "\n";
    }
    return out;
}

}  // namespace hlab
