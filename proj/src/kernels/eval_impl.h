// Copyright 2026 The IRPS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Model engines templated on the number type, and the dual-number type they
// are differentiated with.
//
// This header has no include guard on purpose. Each backend translation unit
// defines IRPS_KERNEL_NS before including it, so every inline function and
// template instantiation lands in a backend-private namespace. That keeps the
// AVX2-compiled copies from being merged with the baseline ones at link time.

#ifndef IRPS_KERNEL_NS
#error "define IRPS_KERNEL_NS before including eval_impl.h"
#endif

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "irps/dsl/compiled.h"
#include "irps/error.h"
#include "irps/game.h"
#include "irps/models.h"
#include "irps/objective.h"

#if defined(IRPS_KERNEL_AVX2)
#include <immintrin.h>
#endif

namespace irps::kernels::IRPS_KERNEL_NS {

// Ego payoff table, row = own move, column = opponent move.
inline constexpr double kPayoff[3][3] = {{0, -1, 3}, {3, 0, -1}, {-1, 3, 0}};

// ---------------------------------------------------------------------------
// Tangent-lane arithmetic.

template <int W>
struct ScalarOps {
  static constexpr int kWidth = W;
  static void Zero(double* d) {
    for (int i = 0; i < W; ++i) d[i] = 0.0;
  }
  static void Copy(double* dst, const double* x) {
    for (int i = 0; i < W; ++i) dst[i] = x[i];
  }
  static void Scale(double* dst, double a, const double* x) {
    for (int i = 0; i < W; ++i) dst[i] = a * x[i];
  }
  static void Axpy(double* dst, double a, const double* x) {
    for (int i = 0; i < W; ++i) dst[i] += a * x[i];
  }
  static void Axpby(double* dst, double a, const double* x, double b, const double* y) {
    for (int i = 0; i < W; ++i) dst[i] = a * x[i] + b * y[i];
  }
};

#if defined(IRPS_KERNEL_AVX2)
template <int W>
struct Avx2Ops {
  static_assert(W % 4 == 0, "AVX2 lanes come in fours");
  static constexpr int kWidth = W;
  static void Zero(double* d) {
    const __m256d z = _mm256_setzero_pd();
    for (int i = 0; i < W; i += 4) _mm256_storeu_pd(d + i, z);
  }
  static void Copy(double* dst, const double* x) {
    for (int i = 0; i < W; i += 4) _mm256_storeu_pd(dst + i, _mm256_loadu_pd(x + i));
  }
  static void Scale(double* dst, double a, const double* x) {
    const __m256d va = _mm256_set1_pd(a);
    for (int i = 0; i < W; i += 4) {
      _mm256_storeu_pd(dst + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
  }
  static void Axpy(double* dst, double a, const double* x) {
    const __m256d va = _mm256_set1_pd(a);
    for (int i = 0; i < W; i += 4) {
      _mm256_storeu_pd(dst + i,
                       _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(dst + i)));
    }
  }
  static void Axpby(double* dst, double a, const double* x, double b, const double* y) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    for (int i = 0; i < W; i += 4) {
      const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
      _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), by));
    }
  }
};
#endif

// ---------------------------------------------------------------------------
// Forward-mode dual numbers: a value and one tangent per parameter lane.

struct NoInit {};

template <class Ops>
struct Dual {
  static constexpr int W = Ops::kWidth;
  double v;
  alignas(32) double d[W];

  Dual() : v(0.0) { Ops::Zero(d); }
  Dual(double x) : v(x) { Ops::Zero(d); }  // NOLINT: implicit by design
  Dual(double x, NoInit) : v(x) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    Ops::Axpy(d, 1.0, o.d);
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    Ops::Axpy(d, -1.0, o.d);
    return *this;
  }
};

template <class O>
Dual<O> operator+(const Dual<O>& a, const Dual<O>& b) {
  Dual<O> r(a.v + b.v, NoInit{});
  O::Axpby(r.d, 1.0, a.d, 1.0, b.d);
  return r;
}
template <class O>
Dual<O> operator-(const Dual<O>& a, const Dual<O>& b) {
  Dual<O> r(a.v - b.v, NoInit{});
  O::Axpby(r.d, 1.0, a.d, -1.0, b.d);
  return r;
}
template <class O>
Dual<O> operator*(const Dual<O>& a, const Dual<O>& b) {
  Dual<O> r(a.v * b.v, NoInit{});
  O::Axpby(r.d, b.v, a.d, a.v, b.d);
  return r;
}
template <class O>
Dual<O> operator/(const Dual<O>& a, const Dual<O>& b) {
  const double inv = 1.0 / b.v;
  Dual<O> r(a.v * inv, NoInit{});
  O::Axpby(r.d, inv, a.d, -r.v * inv, b.d);
  return r;
}
template <class O>
Dual<O> operator-(const Dual<O>& a) {
  Dual<O> r(-a.v, NoInit{});
  O::Scale(r.d, -1.0, a.d);
  return r;
}
template <class O>
Dual<O> operator+(const Dual<O>& a, double c) {
  Dual<O> r(a.v + c, NoInit{});
  O::Copy(r.d, a.d);
  return r;
}
template <class O>
Dual<O> operator+(double c, const Dual<O>& a) {
  return a + c;
}
template <class O>
Dual<O> operator-(const Dual<O>& a, double c) {
  return a + (-c);
}
template <class O>
Dual<O> operator-(double c, const Dual<O>& a) {
  Dual<O> r(c - a.v, NoInit{});
  O::Scale(r.d, -1.0, a.d);
  return r;
}
template <class O>
Dual<O> operator*(const Dual<O>& a, double c) {
  Dual<O> r(a.v * c, NoInit{});
  O::Scale(r.d, c, a.d);
  return r;
}
template <class O>
Dual<O> operator*(double c, const Dual<O>& a) {
  return a * c;
}
template <class O>
Dual<O> operator/(const Dual<O>& a, double c) {
  return a * (1.0 / c);
}

// Scalar functions, one overload for plain doubles and one for duals.
inline double Value(double x) { return x; }
template <class O>
double Value(const Dual<O>& x) {
  return x.v;
}

inline double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
inline double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double LogSigmoid(double x) { return -Softplus(-x); }
inline double Exp(double x) { return std::exp(x); }
inline double Log(double x) { return std::log(x); }
inline double Abs(double x) { return std::fabs(x); }

template <class O>
Dual<O> Chain(const Dual<O>& x, double value, double derivative) {
  Dual<O> r(value, NoInit{});
  O::Scale(r.d, derivative, x.d);
  return r;
}
template <class O>
Dual<O> Sigmoid(const Dual<O>& x) {
  const double s = Sigmoid(x.v);
  return Chain(x, s, s * (1.0 - s));
}
template <class O>
Dual<O> Softplus(const Dual<O>& x) {
  return Chain(x, Softplus(x.v), Sigmoid(x.v));
}
template <class O>
Dual<O> LogSigmoid(const Dual<O>& x) {
  return Chain(x, LogSigmoid(x.v), Sigmoid(-x.v));
}
template <class O>
Dual<O> Exp(const Dual<O>& x) {
  const double e = std::exp(x.v);
  return Chain(x, e, e);
}
template <class O>
Dual<O> Log(const Dual<O>& x) {
  return Chain(x, std::log(x.v), 1.0 / x.v);
}
template <class O>
Dual<O> Abs(const Dual<O>& x) {
  return Chain(x, std::fabs(x.v), x.v < 0.0 ? -1.0 : 1.0);
}

// log(exp(x) + exp(y)), tolerating one infinite-negative argument.
template <class T>
T LogAddExp(const T& x, const T& y) {
  const double m = std::max(Value(x), Value(y));
  if (m == -std::numeric_limits<double>::infinity()) return x;
  return Log(Exp(x - m) + Exp(y - m)) + m;
}

template <class T>
void Softmax3(const T* z, T* out) {
  const double m = std::max({Value(z[0]), Value(z[1]), Value(z[2])});
  const T e0 = Exp(z[0] - m);
  const T e1 = Exp(z[1] - m);
  const T e2 = Exp(z[2] - m);
  const T s = e0 + e1 + e2;
  out[0] = e0 / s;
  out[1] = e1 / s;
  out[2] = e2 / s;
}

template <class T>
void LogSoftmax3(const T* z, T* out) {
  const double m = std::max({Value(z[0]), Value(z[1]), Value(z[2])});
  const T ls = Log(Exp(z[0] - m) + Exp(z[1] - m) + Exp(z[2] - m)) + m;
  for (int j = 0; j < 3; ++j) out[j] = z[j] - ls;
}

// ---------------------------------------------------------------------------
// Nash: constant logits.

template <class T>
class NashEngine {
 public:
  void Reset(const T*) {}
  void InitialLogits(T* out) const {
    for (int j = 0; j < 3; ++j) out[j] = T(0.0);
  }
  void Observe(int, int, double, T* out) { InitialLogits(out); }
};

// ---------------------------------------------------------------------------
// CS-EWA.

template <class T>
struct CsEwaTypedParams {
  T log_alpha, log_one_minus_alpha, alpha_prime, phi, delta, rho, beta;

  static CsEwaTypedParams FromTheta(const T* theta) {
    CsEwaTypedParams p;
    p.log_alpha = LogSigmoid(theta[0]);
    p.log_one_minus_alpha = LogSigmoid(-theta[0]);
    p.alpha_prime = Sigmoid(theta[1]);
    p.phi = Sigmoid(theta[2]);
    p.delta = Sigmoid(theta[3]);
    p.rho = Sigmoid(theta[4]);
    p.beta = Softplus(theta[5]);
    return p;
  }
  static CsEwaTypedParams FromPlain(const CsEwaParams& q) {
    CsEwaTypedParams p;
    p.log_alpha = std::log(q.alpha);
    p.log_one_minus_alpha = std::log1p(-q.alpha);
    p.alpha_prime = q.alpha_prime;
    p.phi = q.phi_ewa;
    p.delta = q.delta;
    p.rho = q.rho;
    p.beta = q.beta;
    return p;
  }
};

// N' = rho N + 1; A'_j = (phi N A_j + w_j pi_j) / N' with w_j = 1 for the
// chosen action and delta otherwise.
template <class T>
void EwaUpdateRow(T* attractions, T& n, const CsEwaTypedParams<T>& p, int chosen,
                  const double* payoffs) {
  const T n_new = p.rho * n + 1.0;
  const T inv = T(1.0) / n_new;
  const T carry = p.phi * n * inv;
  for (int j = 0; j < 3; ++j) {
    const T reinforcement = j == chosen ? T(payoffs[j]) : p.delta * payoffs[j];
    attractions[j] = carry * attractions[j] + reinforcement * inv;
  }
  n = n_new;
}

// Opponent forecast at context row (self, shadow).
template <class T>
void EwaForecast(const T* self_row, const T* shadow_row, const CsEwaTypedParams<T>& p,
                 T* forecast) {
  T z[3];
  T self_p[3];
  for (int j = 0; j < 3; ++j) z[j] = p.beta * self_row[j];
  Softmax3(z, self_p);
  T shadow_p[3];
  for (int j = 0; j < 3; ++j) z[j] = p.beta * shadow_row[j];
  Softmax3(z, shadow_p);
  // The opponent best-responds (logit) to the agent's adaptive policy.
  for (int j = 0; j < 3; ++j) {
    T ev = self_p[0] * kPayoff[j][0];
    ev += self_p[1] * kPayoff[j][1];
    ev += self_p[2] * kPayoff[j][2];
    z[j] = p.beta * ev;
  }
  T soph_p[3];
  Softmax3(z, soph_p);
  for (int j = 0; j < 3; ++j) {
    forecast[j] = p.alpha_prime * shadow_p[j] + (1.0 - p.alpha_prime) * soph_p[j];
  }
}

template <class T>
void EwaAct(const T* self_row, const T* shadow_row, const CsEwaTypedParams<T>& p, T* out) {
  T forecast[3];
  EwaForecast(self_row, shadow_row, p, forecast);
  T z[3];
  T log_self[3];
  for (int j = 0; j < 3; ++j) z[j] = p.beta * self_row[j];
  LogSoftmax3(z, log_self);
  for (int j = 0; j < 3; ++j) {
    T ev = forecast[0] * kPayoff[j][0];
    ev += forecast[1] * kPayoff[j][1];
    ev += forecast[2] * kPayoff[j][2];
    z[j] = p.beta * ev;
  }
  T log_br[3];
  LogSoftmax3(z, log_br);
  for (int j = 0; j < 3; ++j) {
    out[j] = LogAddExp(p.log_alpha + log_self[j], p.log_one_minus_alpha + log_br[j]);
  }
}

template <class T>
class CsEwaEngine {
 public:
  void Reset(const T* theta) {
    SetParams(CsEwaTypedParams<T>::FromTheta(theta));
  }
  void SetParams(const CsEwaTypedParams<T>& p) {
    p_ = p;
    for (auto& x : self_) x = T(0.0);
    for (auto& x : shadow_) x = T(0.0);
    for (auto& x : self_n_) x = T(1.0);
    for (auto& x : shadow_n_) x = T(1.0);
    len_ = 0;
  }
  void InitialLogits(T* out) const {
    for (int j = 0; j < 3; ++j) out[j] = T(0.0);
  }
  void Observe(int a, int o, double, T* out) {
    if (len_ == kCsEwaHistory) {
      const int s = Context();
      const double self_pi[3] = {kPayoff[0][o], kPayoff[1][o], kPayoff[2][o]};
      const double shadow_pi[3] = {kPayoff[0][a], kPayoff[1][a], kPayoff[2][a]};
      EwaUpdateRow(&self_[s * 3], self_n_[s], p_, a, self_pi);
      EwaUpdateRow(&shadow_[s * 3], shadow_n_[s], p_, o, shadow_pi);
    }
    Push(a, o);
    if (len_ < kCsEwaHistory) {
      InitialLogits(out);
      return;
    }
    const int s = Context();
    EwaAct(&self_[s * 3], &shadow_[s * 3], p_, out);
  }

 private:
  int Context() const {
    return ((hist_[0][0] * 3 + hist_[0][1]) * 3 + hist_[1][0]) * 3 + hist_[1][1];
  }
  void Push(int a, int o) {
    if (len_ == kCsEwaHistory) {
      hist_[0] = hist_[1];
      hist_[1] = {a, o};
    } else {
      hist_[len_] = {a, o};
      ++len_;
    }
  }

  CsEwaTypedParams<T> p_;
  std::array<T, kCsEwaContexts * 3> self_;
  std::array<T, kCsEwaContexts * 3> shadow_;
  std::array<T, kCsEwaContexts> self_n_;
  std::array<T, kCsEwaContexts> shadow_n_;
  std::array<std::array<int, 2>, kCsEwaHistory> hist_{};
  int len_ = 0;
};

// ---------------------------------------------------------------------------
// DSL programs.

template <class T>
class ProgramEngine {
 public:
  explicit ProgramEngine(const dsl::CompiledProgram& p)
      : p_(&p),
        regs_(p.register_size),
        state_(p.state_size),
        raw_(p.param_count),
        unit_(p.param_count),
        pos_(p.param_count) {}

  void Reset(const T* theta) {
    for (int k = 0; k < p_->param_count; ++k) {
      raw_[k] = theta[k];
      unit_[k] = Sigmoid(theta[k]);
      pos_[k] = Softplus(theta[k]);
    }
    for (const dsl::CompiledState& s : p_->states) {
      for (int i = 0; i < s.size; ++i) state_[s.offset + i] = T(s.init);
    }
    have_prev_ = false;
  }

  void InitialLogits(T* out) {
    if (!p_->policy_static) {
      for (int j = 0; j < 3; ++j) out[j] = T(0.0);
      return;
    }
    Ctx c{0, 0, 0, 0, 0.0};
    Run(p_->policy_first, p_->policy_end, c);
    Emit(out);
  }

  void Observe(int a, int o, double r, T* out) {
    const Ctx c{a, o, prev_a_, prev_o_, r};
    const int n = static_cast<int>(p_->states.size());
    for (int i = 0; i < n; ++i) {
      const dsl::CompiledState& s = p_->states[i];
      if (s.needs_prev && !have_prev_) continue;
      Run(s.first, s.end, c);
    }
    for (int i = 0; i < n; ++i) {
      const dsl::CompiledState& s = p_->states[i];
      if (s.needs_prev && !have_prev_) continue;
      int base = s.offset;
      int stride = s.size;
      for (int k = 0; k < s.n_at; ++k) {
        stride /= 3;
        base += Index(s.at[k], c) * stride;
      }
      const int count = stride;  // 3^(rank - n_at)
      const T* src = &regs_[s.value_reg];
      if (s.value_rank == 0) {
        for (int k = 0; k < count; ++k) state_[base + k] = src[0];
      } else {
        for (int k = 0; k < count; ++k) state_[base + k] = src[k];
      }
    }
    if (p_->policy_needs_prev && !have_prev_) {
      for (int j = 0; j < 3; ++j) out[j] = T(0.0);
    } else {
      Run(p_->policy_first, p_->policy_end, c);
      Emit(out);
    }
    prev_a_ = a;
    prev_o_ = o;
    have_prev_ = true;
  }

  // Flat state buffer, for inspection in tests.
  const std::vector<T>& state() const { return state_; }

 private:
  struct Ctx {
    int a, o, prev_a, prev_o;
    double r;
  };

  static int Index(dsl::IndexVar v, const Ctx& c) {
    switch (v) {
      case dsl::IndexVar::kA:
        return c.a;
      case dsl::IndexVar::kAOpp:
        return c.o;
      case dsl::IndexVar::kPrevA:
        return c.prev_a;
      case dsl::IndexVar::kPrevAOpp:
        return c.prev_o;
      case dsl::IndexVar::kFree:
        break;
    }
    return -1;
  }

  static int Size(int rank) { return rank == 0 ? 1 : rank == 1 ? 3 : rank == 2 ? 9 : 27; }

  void Emit(T* out) const {
    const T* v = &regs_[p_->policy_reg];
    for (int j = 0; j < 3; ++j) out[j] = p_->policy_rank == 0 ? v[0] : v[j];
  }

  void Run(int first, int end, const Ctx& c) {
    T* R = regs_.data();
    for (int pc = first; pc < end; ++pc) {
      const dsl::Instr& in = p_->code[pc];
      T* dst = R + in.dst;
      const int n = Size(in.rank);
      switch (in.op) {
        case dsl::Op::kConst:
          dst[0] = T(in.value);
          break;
        case dsl::Op::kVector:
          for (int j = 0; j < 3; ++j) dst[j] = T(in.vec[j]);
          break;
        case dsl::Op::kParam:
          dst[0] = in.transform == dsl::ParamTransform::kUnit       ? unit_[in.param]
                   : in.transform == dsl::ParamTransform::kPositive ? pos_[in.param]
                                                                    : raw_[in.param];
          break;
        case dsl::Op::kReward:
          dst[0] = T(c.r);
          break;
        case dsl::Op::kCfReward:
          for (int j = 0; j < 3; ++j) dst[j] = T(kPayoff[j][c.o]);
          break;
        case dsl::Op::kSlice:
          Slice(in, c, dst);
          break;
        case dsl::Op::kOnehot: {
          const int k = Index(in.idx[0], c);
          for (int j = 0; j < 3; ++j) dst[j] = T(j == k ? 1.0 : 0.0);
          break;
        }
        case dsl::Op::kAdd:
        case dsl::Op::kSub:
        case dsl::Op::kMul:
        case dsl::Op::kDiv:
          Binary(in, R, dst, n);
          break;
        case dsl::Op::kEma: {
          const T* x = R + in.src[0];
          const T* y = R + in.src[1];
          const T& rate = R[in.src[2]];
          const T keep = 1.0 - rate;
          const bool bx = in.src_rank[0] > 0;
          const bool by = in.src_rank[1] > 0;
          for (int i = 0; i < n; ++i) dst[i] = keep * x[bx ? i : 0] + rate * y[by ? i : 0];
          break;
        }
        case dsl::Op::kDecay: {
          const T* x = R + in.src[0];
          const T& rate = R[in.src[1]];
          for (int i = 0; i < n; ++i) dst[i] = rate * x[i];
          break;
        }
        case dsl::Op::kCounter: {
          const T* x = R + in.src[0];
          for (int b = 0; b < n; b += 3) {
            dst[b + 0] = x[b + 2];
            dst[b + 1] = x[b + 0];
            dst[b + 2] = x[b + 1];
          }
          break;
        }
        case dsl::Op::kSoftmax: {
          const T* x = R + in.src[0];
          const T& temp = R[in.src[1]];
          T z[3];
          for (int b = 0; b < n; b += 3) {
            for (int j = 0; j < 3; ++j) z[j] = temp * x[b + j];
            Softmax3(z, dst + b);
          }
          break;
        }
        case dsl::Op::kSum: {
          const T* x = R + in.src[0];
          for (int i = 0; i < n; ++i) {
            T s = x[3 * i];
            s += x[3 * i + 1];
            s += x[3 * i + 2];
            dst[i] = s;
          }
          break;
        }
      }
    }
  }

  void Binary(const dsl::Instr& in, const T* R, T* dst, int n) {
    const T* x = R + in.src[0];
    const T* y = R + in.src[1];
    const int sx = in.src_rank[0] > 0 ? 1 : 0;
    const int sy = in.src_rank[1] > 0 ? 1 : 0;
    switch (in.op) {
      case dsl::Op::kAdd:
        for (int i = 0; i < n; ++i) dst[i] = x[i * sx] + y[i * sy];
        break;
      case dsl::Op::kSub:
        for (int i = 0; i < n; ++i) dst[i] = x[i * sx] - y[i * sy];
        break;
      case dsl::Op::kMul:
        for (int i = 0; i < n; ++i) dst[i] = x[i * sx] * y[i * sy];
        break;
      default:  // kDiv, guarded
        for (int i = 0; i < n; ++i) dst[i] = x[i * sx] / (Abs(y[i * sy]) + 1e-8);
        break;
    }
  }

  void Slice(const dsl::Instr& in, const Ctx& c, T* dst) const {
    const dsl::CompiledState& s = p_->states[in.state];
    const T* st = state_.data() + s.offset;
    int base = 0;
    int stride = s.size;
    int free_strides[3];
    int nfree = 0;
    for (int k = 0; k < s.rank; ++k) {
      stride /= 3;
      if (in.idx[k] == dsl::IndexVar::kFree) {
        free_strides[nfree++] = stride;
      } else {
        base += Index(in.idx[k], c) * stride;
      }
    }
    switch (nfree) {
      case 0:
        dst[0] = st[base];
        break;
      case 1:
        for (int i = 0; i < 3; ++i) dst[i] = st[base + i * free_strides[0]];
        break;
      case 2:
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            dst[i * 3 + j] = st[base + i * free_strides[0] + j * free_strides[1]];
          }
        }
        break;
      default:
        for (int i = 0; i < 27; ++i) dst[i] = st[base + i];
        break;
    }
  }

  const dsl::CompiledProgram* p_;
  std::vector<T> regs_;
  std::vector<T> state_;
  std::vector<T> raw_, unit_, pos_;
  int prev_a_ = 0;
  int prev_o_ = 0;
  bool have_prev_ = false;
};

// ---------------------------------------------------------------------------
// Likelihood.

[[noreturn]] inline void NonFinite(const GameTrajectory& g, int round) {
  throw Error("non-finite logits in game '" + g.game_id + "' predicting round " +
              std::to_string(round));
}

// Adds the NLL of one game to `total` and the number of scored predictions
// to `count`.
template <class T, class Engine>
void AccumulateGame(Engine& engine, const T* theta, const GameTrajectory& g,
                    const ScoreOptions& opts, T& total, long& count) {
  engine.Reset(theta);
  int limit = g.T();
  if (opts.mask_padding && g.padded_from) limit = std::min(limit, *g.padded_from);
  T logits[3];
  for (int t = 0; t + 1 < limit; ++t) {
    const RoundRecord& rec = g.rounds[t];
    engine.Observe(ToInt(rec.ego), ToInt(rec.opp), rec.reward, logits);
    const int target = ToInt(g.rounds[t + 1].ego);
    const double m = std::max({Value(logits[0]), Value(logits[1]), Value(logits[2])});
    if (!std::isfinite(m)) NonFinite(g, t + 1);
    const T lse = Log(Exp(logits[0] - m) + Exp(logits[1] - m) + Exp(logits[2] - m)) + m;
    total += lse - logits[target];
    ++count;
  }
}

template <class T>
void CheckTotal(const T& total) {
  if (!std::isfinite(Value(total))) throw Error("non-finite negative log-likelihood");
}

template <class T>
NllGrad Evaluate(const Model& model, std::span<const double> theta,
                 std::span<const GameTrajectory> games, const ScoreOptions& opts) {
  const int np = model.param_count();
  std::vector<T> th(std::max(np, 1), T(0.0));
  for (int k = 0; k < np; ++k) {
    th[k] = T(theta[k]);
    if constexpr (!std::is_same_v<T, double>) th[k].d[k] = 1.0;
  }
  T total(0.0);
  long count = 0;
  switch (model.kind()) {
    case ModelKind::kNash: {
      NashEngine<T> e;
      for (const GameTrajectory& g : games) AccumulateGame(e, th.data(), g, opts, total, count);
      break;
    }
    case ModelKind::kCsEwa: {
      auto e = std::make_unique<CsEwaEngine<T>>();
      for (const GameTrajectory& g : games) AccumulateGame(*e, th.data(), g, opts, total, count);
      break;
    }
    case ModelKind::kProgram: {
      ProgramEngine<T> e(*model.program());
      for (const GameTrajectory& g : games) AccumulateGame(e, th.data(), g, opts, total, count);
      break;
    }
  }
  CheckTotal(total);
  NllGrad out;
  out.nll = Value(total);
  out.predictions = count;
  out.grad.assign(np, 0.0);
  if constexpr (!std::is_same_v<T, double>) {
    for (int k = 0; k < np; ++k) out.grad[k] = total.d[k];
  }
  return out;
}

template <template <int> class Ops>
NllGrad EvaluateWithGradient(const Model& model, std::span<const double> theta,
                             std::span<const GameTrajectory> games, const ScoreOptions& opts) {
  const int np = model.param_count();
  if (np == 0) return Evaluate<double>(model, theta, games, opts);
  if (np <= 4) return Evaluate<Dual<Ops<4>>>(model, theta, games, opts);
  if (np <= 8) return Evaluate<Dual<Ops<8>>>(model, theta, games, opts);
  return Evaluate<Dual<Ops<12>>>(model, theta, games, opts);
}

template <template <int> class Ops>
void ApplyTangentOp(TangentOp op, int width, double* dst, double a, const double* x, double b,
                    const double* y) {
  auto run = [&](auto tag) {
    using O = decltype(tag);
    switch (op) {
      case TangentOp::kScale:
        O::Scale(dst, a, x);
        break;
      case TangentOp::kAxpy:
        O::Axpy(dst, a, x);
        break;
      case TangentOp::kAxpby:
        O::Axpby(dst, a, x, b, y);
        break;
    }
  };
  switch (width) {
    case 4:
      run(Ops<4>{});
      break;
    case 8:
      run(Ops<8>{});
      break;
    case 12:
      run(Ops<12>{});
      break;
    default:
      throw ContractViolation("tangent width must be 4, 8 or 12");
  }
}

}  // namespace irps::kernels::IRPS_KERNEL_NS
