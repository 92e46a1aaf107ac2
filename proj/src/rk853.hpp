#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

// Embedded adaptive Runge-Kutta 8(5,3) stepper (Dormand-Prince coefficients,
// Hairer/Norsett/Wanner layout) for a three-component complex state. The
// error estimate combines the embedded 5th- and 3rd-order differences; step
// control is the standard deadbeat controller. No dense output: the driver
// clamps steps so that requested sample times are hit exactly.

namespace lamqed::detail {

using RkState = std::array<std::complex<double>, 3>;

namespace rk853 {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd-order error weights
constexpr double bh1 = 0.244094488188976377952755905512e+00;
constexpr double bh2 = 0.733846688281611857341361741547e+00;
constexpr double bh3 = 0.220588235294117647058823529412e-01;

// 5th-order error weights
constexpr double e1 = 0.1312004499419488073250102996e-01;
constexpr double e6 = -0.1225156446376204440720569753e+01;
constexpr double e7 = -0.4957589496572501915214079952e+00;
constexpr double e8 = 0.1664377182454986536961530415e+01;
constexpr double e9 = -0.3503288487499736816886487290e+00;
constexpr double e10 = 0.3341791187130174790297318841e+00;
constexpr double e11 = 0.8192320648511571246570742613e-01;
constexpr double e12 = -0.2235530786388629525884427845e-01;

}  // namespace rk853

template <class Rhs>
class Rk853 {
 public:
  Rk853(Rhs rhs, double rtol, double atol)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  void start(double t0, const RkState& y0) {
    t_ = t0;
    y_ = y0;
    f0_ = rhs_(t_, y_);
    h_ = initial_step();
    n_steps_ = 0;
  }

  // Advances the solution to exactly t_target (>= current time).
  void advance_to(double t_target) {
    while (t_ < t_target) {
      if (n_steps_ > kMaxSteps) {
        std::ostringstream msg;
        msg << "rk853: exceeded " << kMaxSteps << " steps at t = " << t_
            << " (step size collapsed; parameters pathological)";
        throw std::runtime_error(msg.str());
      }
      const double remaining = t_target - t_;
      double h = std::min(h_, remaining);
      if (h < 4.0 * kEps * std::max(1.0, std::abs(t_))) {
        // Remaining gap is below resolvable step size; snap to the target.
        if (remaining <= 4.0 * kEps * std::max(1.0, std::abs(t_))) {
          t_ = t_target;
          return;
        }
        underflow();
      }
      const bool clamped = h < h_;
      bool had_rejection = false;
      bool accepted = false;
      while (!accepted) {
        RkState y_new;
        double err = attempt(h, y_new);
        if (!std::isfinite(err)) err = 1e10;
        if (err <= 1.0) {
          const double scale = err == 0.0
              ? kMaxScale
              : std::clamp(kSafety * std::pow(err, -1.0 / 8.0), kMinScale, kMaxScale);
          t_ += h;
          y_ = y_new;
          f0_ = rhs_(t_, y_);
          const double h_next = h * (had_rejection ? std::min(scale, 1.0) : scale);
          // A step clamped to an output point says nothing about the
          // natural step size; never let it shrink the proposal.
          h_ = (clamped && !had_rejection) ? std::max(h_, h_next) : h_next;
          accepted = true;
          ++n_steps_;
        } else {
          h *= std::clamp(kSafety * std::pow(err, -1.0 / 8.0), kMinScale, 1.0);
          had_rejection = true;
          if (h < 4.0 * kEps * std::max(1.0, std::abs(t_))) underflow();
        }
      }
    }
  }

  const RkState& state() const { return y_; }
  double time() const { return t_; }
  long steps() const { return n_steps_; }

 private:
  static constexpr double kEps = 2.220446049250313e-16;
  static constexpr double kSafety = 0.9;
  static constexpr double kMinScale = 1.0 / 3.0;
  static constexpr double kMaxScale = 6.0;
  static constexpr long kMaxSteps = 5'000'000;  // ~25x the stiffest real run

  [[noreturn]] void underflow() const {
    std::ostringstream msg;
    msg << "rk853: step size underflow at t = " << t_
        << " (error tolerances unattainable; parameters pathological)";
    throw std::runtime_error(msg.str());
  }

  double initial_step() const {
    using std::abs;
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double sc = atol_ + rtol_ * abs(y_[i]);
      d0 += std::norm(y_[i] / sc);
      d1 += std::norm(f0_[i] / sc);
    }
    double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1);
    RkState y1;
    for (int i = 0; i < 3; ++i) y1[i] = y_[i] + h0 * f0_[i];
    const RkState f1 = rhs_(t_ + h0, y1);
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double sc = atol_ + rtol_ * abs(y_[i]);
      d2 += std::norm((f1[i] - f0_[i]) / sc);
    }
    d2 = std::sqrt(d2) / h0;
    d1 = std::sqrt(d1);
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dm, 1.0 / 8.0);
    return std::min(100.0 * h0, h1);
  }

  // One trial step of size h; returns the scaled error (accept when <= 1)
  // and fills y_new with the 8th-order result.
  double attempt(double h, RkState& y_new) {
    using namespace rk853;
    const double t = t_;
    const RkState& y = y_;
    const RkState& k1 = f0_;
    RkState w, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12;

    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * (a21 * k1[i]);
    k2 = rhs_(t + c2 * h, w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs_(t + c3 * h, w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
    k4 = rhs_(t + c4 * h, w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs_(t + c5 * h, w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs_(t + c6 * h, w);
    for (int i = 0; i < 3; ++i)
      w[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs_(t + c7 * h, w);
    for (int i = 0; i < 3; ++i)
      w[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
    k8 = rhs_(t + c8 * h, w);
    for (int i = 0; i < 3; ++i)
      w[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] +
                         a97 * k7[i] + a98 * k8[i]);
    k9 = rhs_(t + c9 * h, w);
    for (int i = 0; i < 3; ++i)
      w[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] +
                         a107 * k7[i] + a108 * k8[i] + a109 * k9[i]);
    k10 = rhs_(t + c10 * h, w);
    for (int i = 0; i < 3; ++i)
      w[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] +
                         a117 * k7[i] + a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
    k11 = rhs_(t + c11 * h, w);
    for (int i = 0; i < 3; ++i)
      w[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] +
                         a127 * k7[i] + a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] +
                         a1211 * k11[i]);
    k12 = rhs_(t + h, w);

    double err3 = 0.0, err5 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const std::complex<double> sum =
          b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
          b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
      y_new[i] = y[i] + h * sum;
      const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const std::complex<double> e3 = sum - bh1 * k1[i] - bh2 * k9[i] - bh3 * k12[i];
      const std::complex<double> e5 =
          e1 * k1[i] + e6 * k6[i] + e7 * k7[i] + e8 * k8[i] + e9 * k9[i] +
          e10 * k10[i] + e11 * k11[i] + e12 * k12[i];
      err3 += std::norm(e3 / sc);
      err5 += std::norm(e5 / sc);
    }
    const double denom = err5 + 0.01 * err3;
    return denom > 0.0 ? std::abs(h) * err5 * std::sqrt(1.0 / (3.0 * denom)) : 0.0;
  }

  Rhs rhs_;
  double rtol_, atol_;
  double t_ = 0.0;
  double h_ = 0.0;
  long n_steps_ = 0;
  RkState y_{};
  RkState f0_{};
};

}  // namespace lamqed::detail
