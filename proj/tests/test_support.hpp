// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "surfsynth/grid.hpp"
#include "surfsynth/rng.hpp"

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(std::filesystem::temp_directory_path() /
                ("surfsynth_" + tag + "_" + std::to_string(static_cast<long>(::getpid()))))
    {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline surfsynth::HeightField noise_field(std::size_t rows, std::size_t cols, double spacing, std::uint64_t seed,
                                          double std_dev = 1.0)
{
    surfsynth::Rng rng(seed);
    std::normal_distribution<double> n(0.0, std_dev);
    surfsynth::HeightField hf(rows, cols, spacing);
    for (double& v : hf.values()) v = n(rng);
    return hf;
}

inline surfsynth::Image8 noise_image(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    surfsynth::Rng rng(seed);
    surfsynth::Image8 img(rows, cols);
    for (auto& v : img.values()) v = static_cast<std::uint8_t>(rng() % 256);
    return img;
}

}  // namespace testing
