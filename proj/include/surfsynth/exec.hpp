// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <exception>
#include <mutex>

namespace surfsynth {

/// Selects between the OpenMP kernel and its single-threaded reference.
/// Both produce bit-identical results; `serial` exists for testing and
/// benchmarking.
enum class Exec { serial, parallel };

constexpr bool is_parallel(Exec e) { return e == Exec::parallel; }

/// Exceptions must not leave an OpenMP region. Loop bodies run through
/// `run`, which keeps the first exception; `rethrow` raises it afterwards.
class ExceptionSlot {
public:
    template <class F>
    void run(F&& body) noexcept
    {
        try {
            body();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }

    void rethrow() const
    {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace surfsynth
