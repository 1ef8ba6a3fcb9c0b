// Copyright 2026 The jcsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// analysis.hpp - diagnostics built on the closed forms: sigma~_z spectrum,
// observable time series on a gt grid, the conservation (back-action) audit,
// the quasi-particle-likeness metric and collapse/revival detection.

#pragma once

#include "jcsub/hilbert.hpp"
#include "jcsub/jcm.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jcsub::analysis {

struct SigmaZSpectrum {
    double t = 0.0;
    double offset = 0.0;      // (S1 + S2) / 2
    double dispersion = 0.0;  // sqrt(((S1 - S2)/2)^2 + |S3|^2)
    double upper = 0.0;       // offset + dispersion
    double lower = 0.0;       // offset - dispersion
};

/// Offset/dispersion of a 2x2 sigma~_z, cross-checked against a direct
/// eigendecomposition (CrossCheckError beyond 1e-10).
SigmaZSpectrum sigma_z_spectrum(const ComplexMatrix& sigma_z_tilde, double t);

/// Uniform grid in units of g t.
struct GtGrid {
    double start = 0.0;
    double stop = 50.0;
    int steps = 2000;

    void validate() const;
    std::vector<double> values() const;
    double spacing() const { return (stop - start) / (steps - 1); }
};

/// t for a given g t. With g = 0 the grid is read directly as t.
double time_from_gt(double gt, const jcm::JcmParams& p);

struct Scenario {
    std::string id = "scenario";
    jcm::JcmParams params{1.0, 1.0, 0.0, 1};
    AtomDensity atom_init = AtomDensity::excited();
    double alpha_mag = 0.0;
    double alpha_phase = 0.0;
    GtGrid grid;
    std::vector<std::string> channels;  // empty: every closed-form channel
    bool oracle = false;
};

/// Closed-form channel names, in output order.
const std::vector<std::string>& closed_channel_names();
/// Oracle channels appended when Scenario::oracle is set.
const std::vector<std::string>& oracle_channel_names();

class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::string scenario_id, std::vector<double> grid);

    const std::string& scenario_id() const noexcept { return id_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }

    void add_channel(const std::string& name, std::vector<double> values);
    bool has(const std::string& name) const;
    const std::vector<double>& channel(const std::string& name) const;
    const std::vector<std::string>& channel_names() const noexcept { return names_; }

private:
    std::string id_;
    std::vector<double> grid_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> values_;
};

struct SeriesResult {
    TimeSeries series;
    int n_max = 0;
    double tail_mass = 0.0;
    bool tail_ok = true;             // tail_mass below the configured bound
    double series_tail_ratio = 0.0;  // worst last-term ratio of the spin series
    bool series_truncation_ok = true;
    double conservation_max_residual = 0.0;
    /// max |closed - oracle| per oracle channel (empty without oracle).
    std::map<std::string, double> oracle_deviation;
    double oracle_tolerance = 0.0;
    bool oracle_ok = true;
};

inline constexpr double kDefaultTailBound = 1e-10;
/// Largest closed-vs-oracle gap accepted per channel.
inline constexpr double kOracleTolerance = 1e-8;

SeriesResult observable_series(const Scenario& scenario, double tail_bound = kDefaultTailBound);

struct ConservationAudit {
    double lhs = 0.0;
    std::vector<double> residuals;
    double max_residual = 0.0;
};

/// <n> + (rho_uu - rho_dd)/2 against <N~(t)> + <sigma~_z(t)>/2 pointwise.
ConservationAudit conservation_audit(const TimeSeries& series, const AtomDensity& rho_atom0,
                                     double mean_photons);

struct QplMetric {
    /// sum p(n)(|C_n| + |D_n|) / sum p(n)|A_n|
    double ratio = 0.0;
    /// sum p(n)|A_n - 1|
    double weighted_deviation = 0.0;
    std::vector<double> per_n_deviation;
    /// |dw| / (2 g sqrt(n+1)); >> 1 is the dispersive regime.
    std::vector<double> detuning_dominance;
};

QplMetric qpl_dominance(double t, const AtomDensity& rho_atom0, const jcm::JcmParams& p,
                        const CoherentState& alpha);

struct FeatureOptions {
    std::string eigen_channel = "sz_eig_upper";
    std::string photon_channel = "n_tilde";
    int window = 0;                 // points; >= 3
    double collapse_fraction = 0.05;
    double revival_factor = 3.0;
};

/// Window of about one Rabi period at the mean photon number, in points.
int default_window(const jcm::JcmParams& p, double mean_photons, const GtGrid& grid);

struct CollapseWindow {
    double start = 0.0;
    double end = 0.0;
    double mid = 0.0;
    double plateau = 0.0;  // mean of the eigen channel inside the window
    double floor = 0.0;    // largest envelope inside the window
    double photon_min_time = 0.0;
    bool photon_min_aligned = false;
};

struct RevivalPeak {
    std::size_t collapse_index = 0;  // the collapse this revival follows
    double onset = 0.0;
    double peak = 0.0;
    double envelope = 0.0;
    double photon_max_time = 0.0;
    bool photon_max_aligned = false;
};

struct CollapseRevivalFeatures {
    int window_points = 0;
    double window_gt = 0.0;
    double initial_amplitude = 0.0;
    std::vector<CollapseWindow> collapses;
    std::vector<RevivalPeak> revivals;
};

/// Collapse: rolling standard deviation of the eigen channel below
/// collapse_fraction of its value over the first window, for at least one
/// window. Revival: the envelope max |x - plateau| over the following lobe,
/// above revival_factor times the collapse floor and followed by a decline.
CollapseRevivalFeatures collapse_revival_features(const TimeSeries& series,
                                                  const FeatureOptions& options);

/// Mean of a channel over [start, end] in grid units.
double mean_over(const TimeSeries& series, const std::string& channel, double start, double end);

}  // namespace jcsub::analysis
