#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace causal {

enum class Exec { Serial, Parallel };

// Runs f(i) for i in [0, n) and returns the results by index. Independent
// trials only: f must not share mutable state across indices.
template <class F>
auto run_trials(std::size_t n, F&& f, Exec exec = Exec::Parallel) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::exception_ptr err;
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < nn; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(causal_trial_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace causal
