// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracle.hpp"

#include <cmath>

namespace ong::oracle {
namespace {

Grid zeros(std::size_t r, std::size_t c) { return Grid(r, std::vector<double>(c, 0.0)); }

Grid rms(const Grid& x) {
  Grid out = x;
  for (auto& row : out) {
    double s = 0.0;
    for (double v : row) s += v * v;
    const double d = std::sqrt(s / static_cast<double>(row.size()) + 1e-6);
    for (double& v : row) v = v / d;
  }
  return out;
}

struct Stream {
  Grid text;
  Grid image;
};

}  // namespace

Grid to_grid(const Matrix& m) {
  Grid g = zeros(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  return g;
}

Matrix from_grid(const Grid& g) {
  Matrix m(g.size(), g.empty() ? 0 : g[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = g[i][j];
  return m;
}

Grid multiply(const Grid& a, const Grid& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Grid c = zeros(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i][p] * b[p][j];
      c[i][j] = s;
    }
  return c;
}

Grid softmax(const Grid& scores, double scale) {
  Grid out = scores;
  for (auto& row : out) {
    long double mx = -INFINITY;
    for (double v : row) mx = std::max(mx, static_cast<long double>(v) * scale);
    long double sum = 0.0L;
    std::vector<long double> e(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      e[j] = std::exp(static_cast<long double>(row[j]) * scale - mx);
      sum += e[j];
    }
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = static_cast<double>(e[j] / sum);
  }
  return out;
}

HeadOut joint_attention(const Grid& qt, const Grid& kt, const Grid& vt, const Grid& qi,
                        const Grid& ki, const Grid& vi) {
  const double sc = 1.0 / std::sqrt(static_cast<double>(qt[0].size()));
  auto one = [&](const Grid& q) {
    Grid out = zeros(q.size(), vt[0].size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      std::vector<double> s;
      for (const auto* keys : {&kt, &ki})
        for (const auto& k : *keys) {
          double d = 0.0;
          for (std::size_t c = 0; c < k.size(); ++c) d += q[i][c] * k[c];
          s.push_back(d);
        }
      const Grid a = softmax(Grid{s}, sc);
      std::size_t j = 0;
      for (const auto* vals : {&vt, &vi})
        for (const auto& v : *vals) {
          for (std::size_t c = 0; c < v.size(); ++c) out[i][c] += a[0][j] * v[c];
          ++j;
        }
    }
    return out;
  };
  return {one(qt), one(qi)};
}

Grid straight_line_denoise(const ToyBackbone& model, const Grid& initial, const Grid& pos_text,
                           const Grid& neg_text, std::size_t steps, std::size_t tau, double alpha,
                           bool orthogonal) {
  const std::size_t n_img = initial.size(), d = initial[0].size();
  const Grid temb = to_grid(model.time_embedding);
  const Grid head = to_grid(model.head);
  Grid z = initial;
  const double dt = 1.0 / static_cast<double>(steps);

  for (std::size_t t = 0; t < steps; ++t) {
    const double s = dt * static_cast<double>(t);
    const bool fire = t >= tau;
    Grid x0 = z;
    for (std::size_t i = 0; i < n_img; ++i)
      for (std::size_t c = 0; c < d; ++c) x0[i][c] += s * temb[0][c];

    Stream pos{pos_text, x0};
    Stream neg{neg_text, {}};
    for (const auto& block : model.blocks) {
      const Grid pt = rms(pos.text), pi = rms(pos.image), nt = rms(neg.text);
      const std::size_t H = block.attention.heads();
      const std::size_t dv = block.attention.d_v();
      const std::size_t dk = block.attention.d_k();
      const double sc = 1.0 / std::sqrt(static_cast<double>(dk));
      Grid cat_pt = zeros(pt.size(), H * dv), cat_pi = zeros(n_img, H * dv),
           cat_nt = zeros(nt.size(), H * dv);

      for (std::size_t h = 0; h < H; ++h) {
        const auto& tw = block.attention.text[h];
        const auto& iw = block.attention.image[h];
        const Grid qpt = multiply(pt, to_grid(tw.query)), kpt = multiply(pt, to_grid(tw.key)),
                   vpt = multiply(pt, to_grid(tw.value));
        const Grid qpi = multiply(pi, to_grid(iw.query)), kpi = multiply(pi, to_grid(iw.key)),
                   vpi = multiply(pi, to_grid(iw.value));
        const Grid qnt = multiply(nt, to_grid(tw.query)), knt = multiply(nt, to_grid(tw.key)),
                   vnt = multiply(nt, to_grid(tw.value));

        const HeadOut p = joint_attention(qpt, kpt, vpt, qpi, kpi, vpi);
        const HeadOut n = joint_attention(qnt, knt, vnt, qpi, kpi, vpi);
        for (std::size_t i = 0; i < pt.size(); ++i)
          for (std::size_t c = 0; c < dv; ++c) cat_pt[i][h * dv + c] = p.text[i][c];
        for (std::size_t i = 0; i < nt.size(); ++i)
          for (std::size_t c = 0; c < dv; ++c) cat_nt[i][h * dv + c] = n.text[i][c];

        // Image queries: split each softmax row into text and image key parts.
        for (std::size_t i = 0; i < n_img; ++i) {
          auto split = [&](const Grid& keys_t, const Grid& vals_t, std::vector<double>& zt,
                           std::vector<double>& zi) {
            std::vector<double> sco;
            for (const auto& k : keys_t) {
              double v = 0.0;
              for (std::size_t c = 0; c < dk; ++c) v += qpi[i][c] * k[c];
              sco.push_back(v);
            }
            for (const auto& k : kpi) {
              double v = 0.0;
              for (std::size_t c = 0; c < dk; ++c) v += qpi[i][c] * k[c];
              sco.push_back(v);
            }
            const Grid a = softmax(Grid{sco}, sc);
            zt.assign(dv, 0.0);
            zi.assign(dv, 0.0);
            for (std::size_t j = 0; j < keys_t.size(); ++j)
              for (std::size_t c = 0; c < dv; ++c) zt[c] += a[0][j] * vals_t[j][c];
            for (std::size_t j = 0; j < n_img; ++j)
              for (std::size_t c = 0; c < dv; ++c) zi[c] += a[0][keys_t.size() + j] * vpi[j][c];
          };
          std::vector<double> zp_t, zp_i, zn_t, zn_i;
          split(kpt, vpt, zp_t, zp_i);
          std::vector<double> out(dv);
          if (fire && alpha != 0.0) {
            split(knt, vnt, zn_t, zn_i);
            double pp = 0.0, np = 0.0;
            for (std::size_t c = 0; c < dv; ++c) {
              pp += zp_t[c] * zp_t[c];
              np += zn_t[c] * zp_t[c];
            }
            const double coef = (orthogonal && pp > 1e-12) ? np / pp : 0.0;
            for (std::size_t c = 0; c < dv; ++c) {
              const double sub = orthogonal ? zn_t[c] - coef * zp_t[c] : zn_t[c];
              out[c] = zp_t[c] - alpha * sub + zp_i[c];
            }
          } else {
            for (std::size_t c = 0; c < dv; ++c) out[c] = zp_t[c] + zp_i[c];
          }
          for (std::size_t c = 0; c < dv; ++c) cat_pi[i][h * dv + c] = out[c];
        }
      }
      auto residual = [](Grid& x, const Grid& cat, const Grid& w) {
        const Grid u = multiply(cat, w);
        for (std::size_t i = 0; i < x.size(); ++i)
          for (std::size_t c = 0; c < x[i].size(); ++c) x[i][c] += u[i][c];
      };
      const Grid wt = to_grid(block.text_out), wi = to_grid(block.image_out);
      residual(pos.text, cat_pt, wt);
      residual(pos.image, cat_pi, wi);
      residual(neg.text, cat_nt, wt);
    }

    Grid delta = zeros(n_img, d);
    for (std::size_t i = 0; i < n_img; ++i)
      for (std::size_t c = 0; c < d; ++c) delta[i][c] = pos.image[i][c] - x0[i][c];
    const Grid xhat = multiply(delta, head);
    for (std::size_t i = 0; i < n_img; ++i)
      for (std::size_t c = 0; c < d; ++c) z[i][c] += dt * (xhat[i][c] - z[i][c]) / (1.0 - s);
  }
  return z;
}

}  // namespace ong::oracle
