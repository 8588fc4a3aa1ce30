// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

// Sentence-pair encoder: summed token/position/segment embeddings, L
// pre-normalization blocks (multi-head self-attention + GELU feed
// forward), a final layer norm, and a CLS classification head. Forward
// and backward are written against the flat parameter vector so the
// checkpoint format and finite-difference checks see one contiguous
// layout.

#include <cmath>
#include <random>
#include <stdexcept>

#include "repotopics/detrand.hpp"
#include "repotopics/kernels.hpp"
#include "repotopics/models.hpp"
#include "train_util.hpp"

namespace repotopics::models {

void EncoderDims::validate() const {
    if (dim <= 0 || layers <= 0 || heads <= 0 || ffn <= 0 || max_positions <= 0)
        throw std::invalid_argument("encoder dimensions must be positive");
    if (dim % heads != 0) throw std::invalid_argument("encoder dim must be divisible by heads");
}

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;

inline double gelu(double x) {
    return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
}

inline double gelu_grad(double x) {
    const double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
    const double inner_grad = kGeluC * (1.0 + 3.0 * kGeluA * x * x);
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * inner_grad;
}

// Offsets into the flat parameter vector.
struct LayerOffsets {
    std::size_t ln1_g, ln1_b;
    std::size_t wq, bq, wk, bk, wv, bv, wo, bo;
    std::size_t ln2_g, ln2_b;
    std::size_t w1, b1, w2, b2;
};

struct Layout {
    int V, d, L, H, F, P, C, dh;
    std::size_t tok, pos, seg;
    std::vector<LayerOffsets> layers;
    std::size_t lnf_g, lnf_b, head_w, head_b;
    std::size_t total;

    Layout(const EncoderDims& dims, std::size_t vocab, std::size_t labels) {
        V = static_cast<int>(vocab);
        d = dims.dim;
        L = dims.layers;
        H = dims.heads;
        F = dims.ffn;
        P = dims.max_positions;
        C = static_cast<int>(labels);
        dh = d / H;
        std::size_t at = 0;
        auto take = [&at](std::size_t n) {
            const std::size_t off = at;
            at += n;
            return off;
        };
        tok = take(static_cast<std::size_t>(V) * d);
        pos = take(static_cast<std::size_t>(P) * d);
        seg = take(2 * static_cast<std::size_t>(d));
        layers.resize(static_cast<std::size_t>(L));
        for (auto& ly : layers) {
            ly.ln1_g = take(d);
            ly.ln1_b = take(d);
            ly.wq = take(static_cast<std::size_t>(d) * d);
            ly.bq = take(d);
            ly.wk = take(static_cast<std::size_t>(d) * d);
            ly.bk = take(d);
            ly.wv = take(static_cast<std::size_t>(d) * d);
            ly.bv = take(d);
            ly.wo = take(static_cast<std::size_t>(d) * d);
            ly.bo = take(d);
            ly.ln2_g = take(d);
            ly.ln2_b = take(d);
            ly.w1 = take(static_cast<std::size_t>(F) * d);
            ly.b1 = take(F);
            ly.w2 = take(static_cast<std::size_t>(d) * F);
            ly.b2 = take(d);
        }
        lnf_g = take(d);
        lnf_b = take(d);
        head_w = take(static_cast<std::size_t>(C) * d);
        head_b = take(C);
        total = at;
    }
};

void layer_norm_row(const double* x, const double* g, const double* b, int d, double* out,
                    double& mean, double& rstd) {
    mean = kernels::sum(x, static_cast<std::size_t>(d)) / d;
    double var = 0.0;
    for (int i = 0; i < d; ++i) {
        const double c = x[i] - mean;
        var += c * c;
    }
    var /= d;
    rstd = 1.0 / std::sqrt(var + kLnEps);
    for (int i = 0; i < d; ++i) out[i] = g[i] * ((x[i] - mean) * rstd) + b[i];
}

// Accumulates into dx, dg, db.
void layer_norm_backward_row(const double* x, double mean, double rstd, const double* g,
                             const double* dy, int d, double* dx, double* dg, double* db) {
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < d; ++i) {
        const double xhat = (x[i] - mean) * rstd;
        const double dxhat = dy[i] * g[i];
        dg[i] += dy[i] * xhat;
        db[i] += dy[i];
        m1 += dxhat;
        m2 += dxhat * xhat;
    }
    m1 /= d;
    m2 /= d;
    for (int i = 0; i < d; ++i) {
        const double xhat = (x[i] - mean) * rstd;
        dx[i] += rstd * (dy[i] * g[i] - m1 - xhat * m2);
    }
}

// y[t] = W x[t] + b for every row of a n x in matrix (W is out x in).
void affine_rows(const double* W, const double* b, const double* x, double* y, int n, int in,
                 int out) {
    for (int t = 0; t < n; ++t) {
        const double* xt = x + static_cast<std::size_t>(t) * in;
        double* yt = y + static_cast<std::size_t>(t) * out;
        for (int i = 0; i < out; ++i)
            yt[i] = b[i] + kernels::dot(W + static_cast<std::size_t>(i) * in, xt, in);
    }
}

// Backward of affine_rows: accumulates dW, db and dx.
void affine_rows_backward(const double* W, const double* x, const double* dy, int n, int in, int out,
                          double* dW, double* db, double* dx) {
    for (int t = 0; t < n; ++t) {
        const double* xt = x + static_cast<std::size_t>(t) * in;
        const double* dyt = dy + static_cast<std::size_t>(t) * out;
        double* dxt = dx + static_cast<std::size_t>(t) * in;
        for (int i = 0; i < out; ++i) {
            const double g = dyt[i];
            if (g == 0.0) continue;
            kernels::axpy(g, xt, dW + static_cast<std::size_t>(i) * in, in);
            db[i] += g;
            kernels::axpy(g, W + static_cast<std::size_t>(i) * in, dxt, in);
        }
    }
}

struct LayerCache {
    std::vector<double> x_in;           // n*d
    std::vector<double> mean1, rstd1;   // n
    std::vector<double> u;              // n*d
    std::vector<double> q, k, v;        // n*d
    std::vector<double> probs;          // H*n*n
    std::vector<double> ctx;            // n*d
    std::vector<double> x_mid;          // n*d
    std::vector<double> mean2, rstd2;   // n
    std::vector<double> u2;             // n*d
    std::vector<double> f1;             // n*F
    std::vector<double> act;            // n*F
};

struct Cache {
    int n = 0;
    std::vector<LayerCache> layers;
    std::vector<double> x_final;  // n*d
    double meanf = 0.0, rstdf = 0.0;
    std::vector<double> cls_norm;  // d
    std::vector<double> logits;    // C
};

void check_example(const Layout& lo, const textprep::EncodedExample& ex) {
    if (ex.token_ids.empty()) throw std::invalid_argument("empty example");
    if (ex.token_ids.size() != ex.segment_ids.size())
        throw std::invalid_argument("token/segment length mismatch");
    if (ex.token_ids.size() > static_cast<std::size_t>(lo.P))
        throw std::invalid_argument("example longer than the position table");
    for (int id : ex.token_ids) {
        if (id < 0 || id >= lo.V) throw std::invalid_argument("token id outside model vocabulary");
    }
    for (int s : ex.segment_ids) {
        if (s != 0 && s != 1) throw std::invalid_argument("segment id must be 0 or 1");
    }
}

void forward(const Layout& lo, const double* p, const textprep::EncodedExample& ex, Cache& cache) {
    check_example(lo, ex);
    const int n = static_cast<int>(ex.token_ids.size());
    const int d = lo.d;
    cache.n = n;
    cache.layers.assign(static_cast<std::size_t>(lo.L), LayerCache{});

    std::vector<double> x(static_cast<std::size_t>(n) * d);
    for (int t = 0; t < n; ++t) {
        const double* tok = p + lo.tok + static_cast<std::size_t>(ex.token_ids[t]) * d;
        const double* pos = p + lo.pos + static_cast<std::size_t>(t) * d;
        const double* seg = p + lo.seg + static_cast<std::size_t>(ex.segment_ids[t]) * d;
        double* xt = x.data() + static_cast<std::size_t>(t) * d;
        for (int i = 0; i < d; ++i) xt[i] = tok[i] + pos[i] + seg[i];
    }

    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(lo.dh));
    for (int l = 0; l < lo.L; ++l) {
        LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];
        const LayerOffsets& off = lo.layers[static_cast<std::size_t>(l)];
        lc.x_in = x;
        lc.mean1.resize(n);
        lc.rstd1.resize(n);
        lc.u.resize(x.size());
        for (int t = 0; t < n; ++t)
            layer_norm_row(lc.x_in.data() + static_cast<std::size_t>(t) * d, p + off.ln1_g,
                           p + off.ln1_b, d, lc.u.data() + static_cast<std::size_t>(t) * d,
                           lc.mean1[t], lc.rstd1[t]);

        lc.q.resize(x.size());
        lc.k.resize(x.size());
        lc.v.resize(x.size());
        affine_rows(p + off.wq, p + off.bq, lc.u.data(), lc.q.data(), n, d, d);
        affine_rows(p + off.wk, p + off.bk, lc.u.data(), lc.k.data(), n, d, d);
        affine_rows(p + off.wv, p + off.bv, lc.u.data(), lc.v.data(), n, d, d);

        lc.probs.assign(static_cast<std::size_t>(lo.H) * n * n, 0.0);
        lc.ctx.assign(x.size(), 0.0);
        for (int h = 0; h < lo.H; ++h) {
            const std::size_t head_off = static_cast<std::size_t>(h) * lo.dh;
            for (int t = 0; t < n; ++t) {
                double* row =
                    lc.probs.data() + (static_cast<std::size_t>(h) * n + t) * n;
                const double* qt = lc.q.data() + static_cast<std::size_t>(t) * d + head_off;
                double mx = -1e300;
                for (int t2 = 0; t2 < n; ++t2) {
                    row[t2] = inv_sqrt_dh *
                              kernels::dot(qt, lc.k.data() + static_cast<std::size_t>(t2) * d + head_off,
                                           static_cast<std::size_t>(lo.dh));
                    mx = std::max(mx, row[t2]);
                }
                double z = 0.0;
                for (int t2 = 0; t2 < n; ++t2) {
                    row[t2] = std::exp(row[t2] - mx);
                    z += row[t2];
                }
                const double inv_z = 1.0 / z;
                double* ct = lc.ctx.data() + static_cast<std::size_t>(t) * d + head_off;
                for (int t2 = 0; t2 < n; ++t2) {
                    row[t2] *= inv_z;
                    kernels::axpy(row[t2], lc.v.data() + static_cast<std::size_t>(t2) * d + head_off,
                                  ct, static_cast<std::size_t>(lo.dh));
                }
            }
        }

        lc.x_mid.resize(x.size());
        for (int t = 0; t < n; ++t) {
            const double* ct = lc.ctx.data() + static_cast<std::size_t>(t) * d;
            double* mt = lc.x_mid.data() + static_cast<std::size_t>(t) * d;
            const double* xt = lc.x_in.data() + static_cast<std::size_t>(t) * d;
            for (int i = 0; i < d; ++i)
                mt[i] = xt[i] + p[off.bo + static_cast<std::size_t>(i)] +
                        kernels::dot(p + off.wo + static_cast<std::size_t>(i) * d, ct,
                                     static_cast<std::size_t>(d));
        }

        lc.mean2.resize(n);
        lc.rstd2.resize(n);
        lc.u2.resize(x.size());
        for (int t = 0; t < n; ++t)
            layer_norm_row(lc.x_mid.data() + static_cast<std::size_t>(t) * d, p + off.ln2_g,
                           p + off.ln2_b, d, lc.u2.data() + static_cast<std::size_t>(t) * d,
                           lc.mean2[t], lc.rstd2[t]);

        lc.f1.resize(static_cast<std::size_t>(n) * lo.F);
        affine_rows(p + off.w1, p + off.b1, lc.u2.data(), lc.f1.data(), n, d, lo.F);
        lc.act.resize(lc.f1.size());
        for (std::size_t i = 0; i < lc.f1.size(); ++i) lc.act[i] = gelu(lc.f1[i]);

        for (int t = 0; t < n; ++t) {
            const double* at = lc.act.data() + static_cast<std::size_t>(t) * lo.F;
            double* xt = x.data() + static_cast<std::size_t>(t) * d;
            const double* mt = lc.x_mid.data() + static_cast<std::size_t>(t) * d;
            for (int i = 0; i < d; ++i)
                xt[i] = mt[i] + p[off.b2 + static_cast<std::size_t>(i)] +
                        kernels::dot(p + off.w2 + static_cast<std::size_t>(i) * lo.F, at,
                                     static_cast<std::size_t>(lo.F));
        }
    }

    cache.x_final = x;
    cache.cls_norm.resize(d);
    layer_norm_row(cache.x_final.data(), p + lo.lnf_g, p + lo.lnf_b, d, cache.cls_norm.data(),
                   cache.meanf, cache.rstdf);

    cache.logits.resize(static_cast<std::size_t>(lo.C));
    for (int c = 0; c < lo.C; ++c)
        cache.logits[static_cast<std::size_t>(c)] =
            p[lo.head_b + static_cast<std::size_t>(c)] +
            kernels::dot(p + lo.head_w + static_cast<std::size_t>(c) * d, cache.cls_norm.data(),
                         static_cast<std::size_t>(d));
}

// dlogits is the gradient of the (per-example) loss at the logits;
// parameter gradients accumulate into g.
void backward(const Layout& lo, const double* p, const textprep::EncodedExample& ex,
              const Cache& cache, const std::vector<double>& dlogits, double* g) {
    const int n = cache.n;
    const int d = lo.d;

    std::vector<double> dcls(static_cast<std::size_t>(d), 0.0);
    for (int c = 0; c < lo.C; ++c) {
        const double gl = dlogits[static_cast<std::size_t>(c)];
        if (gl == 0.0) continue;
        kernels::axpy(gl, cache.cls_norm.data(), g + lo.head_w + static_cast<std::size_t>(c) * d,
                      static_cast<std::size_t>(d));
        g[lo.head_b + static_cast<std::size_t>(c)] += gl;
        kernels::axpy(gl, p + lo.head_w + static_cast<std::size_t>(c) * d, dcls.data(),
                      static_cast<std::size_t>(d));
    }

    // Only the CLS row feeds the head; other rows of the final layer
    // norm carry zero gradient.
    std::vector<double> dx(static_cast<std::size_t>(n) * d, 0.0);
    layer_norm_backward_row(cache.x_final.data(), cache.meanf, cache.rstdf, p + lo.lnf_g,
                            dcls.data(), d, dx.data(), g + lo.lnf_g, g + lo.lnf_b);

    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(lo.dh));
    std::vector<double> dp_row(static_cast<std::size_t>(n));
    std::vector<double> ds_row(static_cast<std::size_t>(n));

    for (int l = lo.L - 1; l >= 0; --l) {
        const LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];
        const LayerOffsets& off = lo.layers[static_cast<std::size_t>(l)];

        // Feed-forward block: x_out = x_mid + W2 gelu(W1 u2 + b1) + b2.
        std::vector<double> dact(static_cast<std::size_t>(n) * lo.F, 0.0);
        for (int t = 0; t < n; ++t) {
            const double* dxt = dx.data() + static_cast<std::size_t>(t) * d;
            const double* at = lc.act.data() + static_cast<std::size_t>(t) * lo.F;
            double* dat = dact.data() + static_cast<std::size_t>(t) * lo.F;
            for (int i = 0; i < d; ++i) {
                const double gi = dxt[i];
                if (gi == 0.0) continue;
                kernels::axpy(gi, at, g + off.w2 + static_cast<std::size_t>(i) * lo.F,
                              static_cast<std::size_t>(lo.F));
                g[off.b2 + static_cast<std::size_t>(i)] += gi;
                kernels::axpy(gi, p + off.w2 + static_cast<std::size_t>(i) * lo.F, dat,
                              static_cast<std::size_t>(lo.F));
            }
        }
        std::vector<double> df1(dact.size());
        for (std::size_t i = 0; i < dact.size(); ++i) df1[i] = dact[i] * gelu_grad(lc.f1[i]);

        std::vector<double> du2(static_cast<std::size_t>(n) * d, 0.0);
        affine_rows_backward(p + off.w1, lc.u2.data(), df1.data(), n, d, lo.F, g + off.w1, g + off.b1,
                             du2.data());

        // dx currently holds the gradient at x_out; the residual passes
        // it through to x_mid, the norm path adds to it.
        std::vector<double>& dx_mid = dx;
        for (int t = 0; t < n; ++t)
            layer_norm_backward_row(lc.x_mid.data() + static_cast<std::size_t>(t) * d, lc.mean2[t],
                                    lc.rstd2[t], p + off.ln2_g,
                                    du2.data() + static_cast<std::size_t>(t) * d, d,
                                    dx_mid.data() + static_cast<std::size_t>(t) * d, g + off.ln2_g,
                                    g + off.ln2_b);

        // Attention block: x_mid = x_in + Wo ctx + bo.
        std::vector<double> dctx(static_cast<std::size_t>(n) * d, 0.0);
        for (int t = 0; t < n; ++t) {
            const double* dxt = dx_mid.data() + static_cast<std::size_t>(t) * d;
            const double* ct = lc.ctx.data() + static_cast<std::size_t>(t) * d;
            double* dct = dctx.data() + static_cast<std::size_t>(t) * d;
            for (int i = 0; i < d; ++i) {
                const double gi = dxt[i];
                if (gi == 0.0) continue;
                kernels::axpy(gi, ct, g + off.wo + static_cast<std::size_t>(i) * d,
                              static_cast<std::size_t>(d));
                g[off.bo + static_cast<std::size_t>(i)] += gi;
                kernels::axpy(gi, p + off.wo + static_cast<std::size_t>(i) * d, dct,
                              static_cast<std::size_t>(d));
            }
        }

        std::vector<double> dq(static_cast<std::size_t>(n) * d, 0.0);
        std::vector<double> dk(static_cast<std::size_t>(n) * d, 0.0);
        std::vector<double> dv(static_cast<std::size_t>(n) * d, 0.0);
        for (int h = 0; h < lo.H; ++h) {
            const std::size_t head_off = static_cast<std::size_t>(h) * lo.dh;
            for (int t = 0; t < n; ++t) {
                const double* prow = lc.probs.data() + (static_cast<std::size_t>(h) * n + t) * n;
                const double* dct = dctx.data() + static_cast<std::size_t>(t) * d + head_off;
                for (int t2 = 0; t2 < n; ++t2) {
                    dp_row[static_cast<std::size_t>(t2)] =
                        kernels::dot(dct, lc.v.data() + static_cast<std::size_t>(t2) * d + head_off,
                                     static_cast<std::size_t>(lo.dh));
                    kernels::axpy(prow[t2], dct, dv.data() + static_cast<std::size_t>(t2) * d + head_off,
                                  static_cast<std::size_t>(lo.dh));
                }
                const double dot_pp =
                    kernels::dot(dp_row.data(), prow, static_cast<std::size_t>(n));
                for (int t2 = 0; t2 < n; ++t2)
                    ds_row[static_cast<std::size_t>(t2)] =
                        (dp_row[static_cast<std::size_t>(t2)] - dot_pp) * prow[t2] * inv_sqrt_dh;
                double* dqt = dq.data() + static_cast<std::size_t>(t) * d + head_off;
                const double* qt = lc.q.data() + static_cast<std::size_t>(t) * d + head_off;
                for (int t2 = 0; t2 < n; ++t2) {
                    const double s = ds_row[static_cast<std::size_t>(t2)];
                    if (s == 0.0) continue;
                    kernels::axpy(s, lc.k.data() + static_cast<std::size_t>(t2) * d + head_off, dqt,
                                  static_cast<std::size_t>(lo.dh));
                    kernels::axpy(s, qt, dk.data() + static_cast<std::size_t>(t2) * d + head_off,
                                  static_cast<std::size_t>(lo.dh));
                }
            }
        }

        std::vector<double> du(static_cast<std::size_t>(n) * d, 0.0);
        affine_rows_backward(p + off.wq, lc.u.data(), dq.data(), n, d, d, g + off.wq, g + off.bq,
                             du.data());
        affine_rows_backward(p + off.wk, lc.u.data(), dk.data(), n, d, d, g + off.wk, g + off.bk,
                             du.data());
        affine_rows_backward(p + off.wv, lc.u.data(), dv.data(), n, d, d, g + off.wv, g + off.bv,
                             du.data());

        // Residual: dx_mid is already the gradient at x_in; add the
        // attention-path contribution through LN1.
        for (int t = 0; t < n; ++t)
            layer_norm_backward_row(lc.x_in.data() + static_cast<std::size_t>(t) * d, lc.mean1[t],
                                    lc.rstd1[t], p + off.ln1_g,
                                    du.data() + static_cast<std::size_t>(t) * d, d,
                                    dx.data() + static_cast<std::size_t>(t) * d, g + off.ln1_g,
                                    g + off.ln1_b);
    }

    for (int t = 0; t < n; ++t) {
        const double* dxt = dx.data() + static_cast<std::size_t>(t) * d;
        kernels::axpy(1.0, dxt, g + lo.tok + static_cast<std::size_t>(ex.token_ids[t]) * d,
                      static_cast<std::size_t>(d));
        kernels::axpy(1.0, dxt, g + lo.pos + static_cast<std::size_t>(t) * d,
                      static_cast<std::size_t>(d));
        kernels::axpy(1.0, dxt, g + lo.seg + static_cast<std::size_t>(ex.segment_ids[t]) * d,
                      static_cast<std::size_t>(d));
    }
}

}  // namespace

PairEncoderModel::PairEncoderModel(EncoderDims dims, std::size_t vocab_size,
                                   std::vector<std::string> taxonomy,
                                   std::uint64_t vocab_fingerprint, std::uint64_t init_seed)
    : dims_(dims),
      vocab_size_(vocab_size),
      taxonomy_(std::move(taxonomy)),
      vocab_fingerprint_(vocab_fingerprint) {
    dims_.validate();
    if (vocab_size_ == 0) throw std::invalid_argument("vocabulary must be nonempty");
    if (taxonomy_.empty()) throw std::invalid_argument("taxonomy must be nonempty");
    const Layout lo(dims_, vocab_size_, taxonomy_.size());
    params_.assign(lo.total, 0.0);

    std::mt19937_64 rng(init_seed);
    auto gauss = [&rng]() {
        double u1 = detrand::unit(rng);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = detrand::unit(rng);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };
    auto fill_gauss = [&](std::size_t off, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) params_[off + i] = 0.02 * gauss();
    };
    auto fill_ones = [&](std::size_t off, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) params_[off + i] = 1.0;
    };
    const std::size_t d = static_cast<std::size_t>(dims_.dim);
    fill_gauss(lo.tok, static_cast<std::size_t>(lo.V) * d);
    fill_gauss(lo.pos, static_cast<std::size_t>(lo.P) * d);
    fill_gauss(lo.seg, 2 * d);
    for (const auto& off : lo.layers) {
        fill_ones(off.ln1_g, d);
        fill_gauss(off.wq, d * d);
        fill_gauss(off.wk, d * d);
        fill_gauss(off.wv, d * d);
        fill_gauss(off.wo, d * d);
        fill_ones(off.ln2_g, d);
        fill_gauss(off.w1, static_cast<std::size_t>(lo.F) * d);
        fill_gauss(off.w2, d * static_cast<std::size_t>(lo.F));
    }
    fill_ones(lo.lnf_g, d);
    fill_gauss(lo.head_w, static_cast<std::size_t>(lo.C) * d);
}

std::vector<double> PairEncoderModel::logits(const textprep::EncodedExample& ex) const {
    const Layout lo(dims_, vocab_size_, taxonomy_.size());
    Cache cache;
    forward(lo, params_.data(), ex, cache);
    return cache.logits;
}

namespace {

double encoder_loss_and_grad(const PairEncoderModel& model,
                             const std::vector<textprep::EncodedExample>& batch,
                             const FocalLossParams& params, std::vector<double>* grad) {
    const Layout lo(model.dims(), model.vocab_size(), model.taxonomy().size());
    const std::size_t C = model.taxonomy().size();
    if (grad != nullptr) grad->assign(model.parameters().size(), 0.0);
    double total = 0.0;
    Cache cache;
    std::vector<double> dlogits(C);
    for (const auto& ex : batch) {
        if (ex.labels.size() != C) throw std::invalid_argument("label vector size mismatch");
        forward(lo, model.parameters().data(), ex, cache);
        for (std::size_t c = 0; c < C; ++c) {
            const double p = sigmoid(cache.logits[c]);
            total += focal_loss(p, ex.labels[c], params) / static_cast<double>(C);
            dlogits[c] = focal_loss_dlogit(p, ex.labels[c], params) / static_cast<double>(C);
        }
        if (grad != nullptr)
            backward(lo, model.parameters().data(), ex, cache, dlogits, grad->data());
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    if (grad != nullptr) kernels::scale(grad->data(), inv_b, grad->size());
    return total * inv_b;
}

struct EncoderTrainAdapter {
    PairEncoderModel& m;
    std::vector<double>& parameters() { return m.parameters(); }
    std::vector<double> logits(const textprep::EncodedExample& ex) const { return m.logits(ex); }
    double batch_loss_and_gradient(const std::vector<textprep::EncodedExample>& batch,
                                   const FocalLossParams& params, std::vector<double>& grad) const {
        return encoder_loss_and_grad(m, batch, params, &grad);
    }
};

}  // namespace

double PairEncoderModel::batch_loss(const std::vector<textprep::EncodedExample>& batch,
                                    const FocalLossParams& params) const {
    return encoder_loss_and_grad(*this, batch, params, nullptr);
}

std::vector<double> PairEncoderModel::batch_gradient(
    const std::vector<textprep::EncodedExample>& batch, const FocalLossParams& params) const {
    std::vector<double> grad;
    encoder_loss_and_grad(*this, batch, params, &grad);
    return grad;
}

PairEncoderModel train_pair_encoder(const std::vector<textprep::EncodedExample>& train,
                                    const std::vector<textprep::EncodedExample>& val,
                                    const TrainConfig& cfg, const EncoderDims& dims,
                                    std::size_t vocab_size, const std::vector<std::string>& taxonomy,
                                    std::uint64_t vocab_fingerprint, TrainTrace* trace) {
    if (train.empty() || val.empty()) throw std::invalid_argument("training requires nonempty splits");
    PairEncoderModel model(dims, vocab_size, taxonomy, vocab_fingerprint, cfg.seed);
    EncoderTrainAdapter adapter{model};
    detail::run_minibatch_training(adapter, train, val, cfg, taxonomy, trace);
    return model;
}

PredictionSet predict(const PairEncoderModel& model, const textprep::EncodedExample& ex,
                      std::string url) {
    std::vector<double> z = model.logits(ex);
    for (double& v : z) v = sigmoid(v);
    return PredictionSet{std::move(url), std::move(z)};
}

}  // namespace repotopics::models
