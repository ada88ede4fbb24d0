// SPDX-License-Identifier: Apache-2.0
//
// Common linear-algebra aliases, architecture tags and error types.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hbf {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class Architecture { FC, OSPS };

std::string_view to_string(Architecture arch);
Architecture architecture_from_string(std::string_view name);

// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Two scheduled users share an analog beam.
class SchedulingError : public Error {
public:
    using Error::Error;
};

class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

class SaturationError : public Error {
public:
    using Error::Error;
};

// Antenna layout of the base station and of every user.
//
// D is the number of antennas one RF chain can drive: the whole array for
// the fully-connected network, a disjoint block of M / M_RF antennas for one
// stream per subarray. The number of simultaneously served users equals M_RF.
class ArrayConfig {
public:
    ArrayConfig(int bs_antennas, int bs_rf_chains, int ue_antennas, int ue_rf_chains,
                Architecture architecture);

    int bs_antennas() const { return bs_antennas_; }
    int bs_rf_chains() const { return bs_rf_chains_; }
    int ue_antennas() const { return ue_antennas_; }
    int ue_rf_chains() const { return ue_rf_chains_; }
    Architecture architecture() const { return architecture_; }

    int subarray_size() const;
    int users() const { return bs_rf_chains_; }
    // First BS antenna wired to RF chain `chain` (always 0 for FC).
    int chain_offset(int chain) const;

    ArrayConfig with_architecture(Architecture arch) const;

private:
    int bs_antennas_;
    int bs_rf_chains_;
    int ue_antennas_;
    int ue_rf_chains_;
    Architecture architecture_;
};

} // namespace hbf
