#include "avgps/ekf.hpp"

#include <cmath>

namespace avgps {

EkfState make_ekf_state(const EkfConfig& cfg) {
  EkfState s;
  s.P = cfg.p0;
  return s;
}

void ekf_predict(EkfState& s, const PredictInput& u, const StateMatrices& m,
                 const EkfConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ekf_predict requires dt > 0");
  double sp = std::sin(u.heading_math);
  double cp = std::cos(u.heading_math);

  Mat4 f = Mat4::identity();
  f(0, 2) = -sp * dt;  // d(x)/d(v_y)
  f(1, 2) = cp * dt;   // d(y)/d(v_y)
  f(2, 2) += m.a11 * dt;
  f(2, 3) = m.a12 * dt;
  f(3, 2) = m.a21 * dt;
  f(3, 3) += m.a22 * dt;

  Vec4 x = f * s.x;
  x[0] += u.v_x * cp * dt;
  x[1] += u.v_x * sp * dt;
  x[2] += m.b11 * u.delta * dt;
  x[3] += m.b21 * u.delta * dt;
  s.x = x;

  Mat4 q = Mat4::diag(cfg.q_pos, cfg.q_pos, cfg.q_vy, cfg.q_r);
  s.P = f * s.P * transpose(f) + dt * q;
  if (max_asymmetry(s.P) > 1e-9) {
    symmetrize(s.P);
    if (max_asymmetry(s.P) > 1e-9) throw CovarianceNotPSD();
  }
  symmetrize(s.P);
}

UpdateResult ekf_update(EkfState& s, const std::vector<double>& z,
                        const std::vector<Vec4>& g_rows, const std::vector<double>& r_diag) {
  const std::size_t m = z.size();
  if (m == 0 || m > 2 || g_rows.size() != m || r_diag.size() != m)
    throw std::invalid_argument("ekf_update supports one or two consistent measurement rows");

  // P G' columns.
  std::array<Vec4, 2> pgt{};
  for (std::size_t c = 0; c < m; ++c)
    for (int i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) acc += s.P(i, j) * g_rows[c][j];
      pgt[c][i] = acc;
    }

  // S = G P G' + R.
  double smat[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) acc += g_rows[a][i] * pgt[b][i];
      smat[a][b] = acc + (a == b ? r_diag[a] : 0.0);
    }

  double sinv[2][2] = {{0, 0}, {0, 0}};
  if (m == 1) {
    if (!(smat[0][0] > 0.0) || !std::isfinite(smat[0][0])) throw SingularInnovationCovariance();
    sinv[0][0] = 1.0 / smat[0][0];
  } else {
    double det = smat[0][0] * smat[1][1] - smat[0][1] * smat[1][0];
    if (!std::isfinite(det) || std::fabs(det) < 1e-300) throw SingularInnovationCovariance();
    sinv[0][0] = smat[1][1] / det;
    sinv[1][1] = smat[0][0] / det;
    sinv[0][1] = -smat[0][1] / det;
    sinv[1][0] = -smat[1][0] / det;
  }

  UpdateResult res;
  res.innovation.resize(m);
  res.nis.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    double gx = 0.0;
    for (int i = 0; i < 4; ++i) gx += g_rows[a][i] * s.x[i];
    res.innovation[a] = z[a] - gx;
    res.nis[a] = res.innovation[a] * res.innovation[a] / smat[a][a];
  }

  // K = P G' S^-1, one column per measurement row.
  std::array<Vec4, 2> k{};
  for (std::size_t a = 0; a < m; ++a)
    for (int i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (std::size_t b = 0; b < m; ++b) acc += pgt[b][i] * sinv[b][a];
      k[a][i] = acc;
    }

  for (int i = 0; i < 4; ++i)
    for (std::size_t a = 0; a < m; ++a) s.x[i] += k[a][i] * res.innovation[a];

  // P <- (I - K G) P.
  Mat4 kg;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < m; ++a) acc += k[a][i] * g_rows[a][j];
      kg(i, j) = acc;
    }
  Mat4 ikg = Mat4::identity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ikg(i, j) -= kg(i, j);
  s.P = ikg * s.P;
  symmetrize(s.P);
  return res;
}

UpdateResult ekf_peek(const EkfState& s, const std::vector<double>& z,
                      const std::vector<Vec4>& g_rows, const std::vector<double>& r_diag) {
  EkfState scratch = s;
  return ekf_update(scratch, z, g_rows, r_diag);
}

void ekf_reset_position(EkfState& s, double x, double y, double var) {
  s.x[0] = x;
  s.x[1] = y;
  for (int i = 0; i < 4; ++i) {
    s.P(0, i) = 0.0;
    s.P(i, 0) = 0.0;
    s.P(1, i) = 0.0;
    s.P(i, 1) = 0.0;
  }
  s.P(0, 0) = var;
  s.P(1, 1) = var;
}

void record_channel(EkfState& s, Channel ch, double innovation, double nis, double t,
                    const EkfConfig& cfg) {
  ChannelMonitor& mon = s.channels[static_cast<int>(ch)];
  mon.last_innovation = innovation;
  mon.last_nis = nis;
  if (nis > cfg.failsafe_threshold) {
    if (!mon.above) {
      mon.above = true;
      mon.above_since = t;
    }
  } else {
    mon.above = false;
  }
}

bool failsafe_monitor(const EkfState& s, const EkfConfig& cfg, double t) {
  int red = 0;
  for (const ChannelMonitor& mon : s.channels)
    if (mon.above && t - mon.above_since >= cfg.failsafe_window_s) ++red;
  return red >= 2;
}

}  // namespace avgps
