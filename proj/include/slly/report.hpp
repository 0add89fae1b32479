#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

namespace slly::report {

inline constexpr const char* kVersion = "1.0.0";

/// Rendering with 17 significant digits; non-finite
/// values become null.
std::string format_double(double v);

/// Serialize with fixed float formatting so identical input gives identical
/// bytes. Object keys keep nlohmann's sorted order.
std::string dump(const nlohmann::json& j, int indent = 2);

/// Write to a sibling temporary file, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// SLLY_THREADS if set and positive, else the hardware concurrency.
int thread_count();

/// Run f(0..n-1) on up to thread_count() threads. Callers write results to
/// per-index slots and reduce afterwards, which keeps output deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace slly::report
