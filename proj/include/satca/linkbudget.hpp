#pragma once

#include "satca/model.hpp"

namespace satca {

// Gain of a Gaussian beam, G(theta) = G_peak - 12 (theta / theta_3dB)^2 dB,
// floored 30 dB below the peak. theta_3dB is the full half-power beamwidth,
// so the -3 dB contour sits at theta_3dB / 2.
double beam_gain_db(const Beam& beam, double offaxis_deg);

double free_space_path_loss_db(double freq_hz, double distance_m);

// Shannon rate on the roll-off adjusted symbol rate B / (1 + rolloff).
double shannon_rate_bps(double bandwidth_hz, double rolloff, double sinr_linear);

// Builds r(c, u) from the synthetic link budget. Ignores
// rate_matrix_override. Each beam's transmit power is split evenly across
// the beam's carriers.
RateMatrix compute_rate_matrix(const Scenario& s);

// The override when present, otherwise compute_rate_matrix(s).
RateMatrix effective_rate_matrix(const Scenario& s);

}  // namespace satca
