#pragma once

#include <cstddef>
#include <string_view>

namespace dynrm {

/// Serial execution is the reference path; parallel must produce identical results.
enum class Exec { serial, parallel };

inline std::string_view to_string(Exec e) { return e == Exec::serial ? "serial" : "parallel"; }

/// Runs body(i) for i in [0, n). Iterations must be independent.
template <class Body>
void parallel_for(Exec exec, std::size_t n, Body&& body) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace dynrm
