// SPDX-License-Identifier: Apache-2.0
//
// ULA steering vectors, DFT beam dictionaries, Rice path gains and
// narrowband channel synthesis.
//
// Angles are carried as direction sines s = sin(theta) in [-1, 1). Grid
// index i of a G-point grid sits at s = 2*i/G - 1 (0-based), which is the
// spatial frequency sampled by column i of the DFT dictionary.

#pragma once

#include <span>
#include <vector>

#include "hbf/rng.hpp"
#include "hbf/types.hpp"

namespace hbf {

struct MultipathComponent {
    double strength = 0.0;    // gamma, linear power
    double rice_factor = 0.0; // eta; +inf is a pure LOS path
    double aoa_sine = 0.0;
    double aod_sine = 0.0;
    int aoa_index = 0; // nearest point of the N-point UE grid
    int aod_index = 0; // nearest point of the M-point BS grid
    double delay = 0.0;   // seconds, metadata only
    double doppler = 0.0; // Hz
    // exp(-j*2*pi*f0*tau), applied to every gain draw.
    cdouble static_phase{1.0, 0.0};
    // Gain of the current coherence block.
    cdouble gain{0.0, 0.0};
};

using PathList = std::vector<MultipathComponent>;

// [a(angle)]_i = exp(j*pi*i*sin(angle)), i = 0..count-1.
CVector array_response(double angle, int count);
CVector array_response_sine(double sine, int count);

double grid_sine(int index, int grid_size);
int nearest_grid_index(double sine, int grid_size);
// Circular distance between two direction sines, in units of grid steps.
double grid_distance(double sine_a, double sine_b, int grid_size);

// rows x cols DFT dictionary with entries
//   exp(j*2*pi*r*(c/cols - 1/2)) / sqrt(cols).
// cols >= rows. Square dictionaries are unitary; for rows < cols every column
// has squared norm rows/cols.
CMatrix dft_dictionary(int rows, int cols);

// One Rice-fading draw sqrt(g)*(sqrt(eta/(1+eta)) + w/sqrt(1+eta)), w ~ CN(0,1).
cdouble sample_path_gain(double strength, double rice_factor, Rng& rng);

// Copy of `paths` with fresh gains for a new coherence block.
PathList refade(std::span<const MultipathComponent> paths, Rng& rng);

// N x M matrix sum_l rho_l * exp(j*2*pi*nu_l*t) * a_R(phi_l) * a_T(theta_l)^H.
// An empty path list gives the zero matrix.
CMatrix channel_matrix(std::span<const MultipathComponent> paths, int ue_antennas,
                       int bs_antennas, double time_ref = 0.0);

// N x D block of the channel driven by RF chain `chain` (whole matrix for FC).
CMatrix chain_block(const CMatrix& channel, const ArrayConfig& config, int chain);

// F_N^H * H_i * F_D for every distinct block H_i: one N x M sheet for FC, one
// per subarray for OSPS.
std::vector<CMatrix> beamspace_transform(const CMatrix& channel, const ArrayConfig& config);

// Beam-domain second-order statistics
//   sum_l gamma_l * |[F_N^H a_R(phi_l)]_n|^2 * |[F_D^H a_T(theta_l)]_m|^2
// with a_T taken over the D antennas of one RF chain.
RMatrix beamspace_statistics(std::span<const MultipathComponent> paths, const ArrayConfig& config);

// Statistics in the parametrization used by the beacon measurement model:
// gamma_l * N * M placed on each path's grid cell. Coincides with
// beamspace_statistics for on-grid FC channels.
RMatrix grid_statistics(std::span<const MultipathComponent> paths, const ArrayConfig& config);

// Index of the path with the largest strength (first one on ties).
int strongest_path(std::span<const MultipathComponent> paths);

} // namespace hbf
