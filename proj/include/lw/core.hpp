// SPDX-License-Identifier: MIT
/**
    \file
    \brief shared vocabulary: linear algebra aliases, error reporting, thread fan-out

    Every module in the library is a set of pure functions over immutable descriptors. This header holds the few
    pieces they all lean on: Eigen aliases, the single exception type with its machine-readable kind, and a small
    parallel_for whose width is taken from the LW_THREADS environment variable.
*/

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace lw {

using vec_t = Eigen::VectorXd;
using mat_t = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

// --------------------------------------------------------------------------------------------------------------------
// Errors
// --------------------------------------------------------------------------------------------------------------------

//! machine-readable category of a failure; the cli maps these onto exit codes
enum class error_kind
{
    domain_violation,
    non_finite,
    dimension_mismatch,
    corank_too_high,
    rank_deficient,
    parameter_out_of_range,
    precondition_failed,
    infeasible,
    outside_domain,
    coverage_failure,
    specialness_failure,
    asymmetric_input,
    malformed_front,
    nesting_violation,
    config_error,
    internal,
};

inline auto to_string(error_kind kind) noexcept -> std::string_view
{
    switch (kind)
    {
    case error_kind::domain_violation: return "domain-violation";
    case error_kind::non_finite: return "non-finite";
    case error_kind::dimension_mismatch: return "dimension-mismatch";
    case error_kind::corank_too_high: return "corank-too-high";
    case error_kind::rank_deficient: return "rank-deficient";
    case error_kind::parameter_out_of_range: return "parameter-out-of-range";
    case error_kind::precondition_failed: return "precondition-failed";
    case error_kind::infeasible: return "infeasible";
    case error_kind::outside_domain: return "outside-domain";
    case error_kind::coverage_failure: return "coverage-failure";
    case error_kind::specialness_failure: return "specialness-failure";
    case error_kind::asymmetric_input: return "asymmetric-input";
    case error_kind::malformed_front: return "malformed-front";
    case error_kind::nesting_violation: return "nesting-violation";
    case error_kind::config_error: return "config-error";
    case error_kind::internal: return "internal";
    }
    return "internal";
}

//! the only exception type thrown by the library
class error : public std::runtime_error
{
public:
    error(error_kind kind, std::string const& message) : std::runtime_error{message}, kind_{kind} {}

    auto kind() const noexcept -> error_kind { return kind_; }

private:
    error_kind kind_;
};

inline auto require(bool condition, error_kind kind, std::string const& message) -> void
{
    if (!condition) throw error{kind, message};
}

inline auto all_finite(vec_t const& v) noexcept -> bool
{
    return v.allFinite();
}

inline auto all_finite(mat_t const& m) noexcept -> bool
{
    return m.allFinite();
}

// --------------------------------------------------------------------------------------------------------------------
// Threads
// --------------------------------------------------------------------------------------------------------------------

//! worker count: LW_THREADS if set to a positive integer, else hardware concurrency (at least 1)
inline auto thread_count() noexcept -> unsigned
{
    if (char const* env = std::getenv("LW_THREADS"))
    {
        char* end = nullptr;
        long const parsed = std::strtol(env, &end, 10);
        if (end != env && parsed > 0) return static_cast<unsigned>(std::min<long>(parsed, 256));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
    runs body(i) for i in [0, count) on thread_count() workers

    Work is handed out in contiguous chunks so results written by index are deterministic regardless of the worker
    count. The first exception thrown by any worker is rethrown on the calling thread.
*/
template <typename body_t> auto parallel_for(std::size_t count, body_t&& body) -> void
{
    unsigned const workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1)));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::size_t const chunk = std::max<std::size_t>(1, count / (8 * workers));

    auto worker = [&]() {
        for (;;)
        {
            std::size_t const begin = next.fetch_add(chunk);
            if (begin >= count) return;
            std::size_t const end = std::min(count, begin + chunk);
            try
            {
                for (std::size_t i = begin; i < end; ++i) body(i);
            }
            catch (...)
            {
                std::lock_guard lock{failure_mutex};
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace lw
