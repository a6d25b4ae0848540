// Generated by tests/oracles/freeze.py; do not edit.
#pragma once

namespace oracle {

inline constexpr double kOuScale_a1_x0p5 = 0.27230006337611209;
inline constexpr double kOuScale_a1_x1 = 1.4452456133883472;
inline constexpr double kOuScale_a1_x2 = 27.43273915249977;
inline constexpr double kOuScale_a0p5_x1 = 1.1914986370255153;
inline constexpr double kOuScale_a2_x1p5 = 21.287316766565777;
inline constexpr double kBmDriftGrowth_m1_t0p01 = 0.096774853575864811;
inline constexpr double kBmDriftGrowth_m1_t1 = 0.75262074789644168;
inline constexpr double kBmDriftGrowth_m1_t1000 = 3.8025979138732831;
inline constexpr double kBmDriftGrowth_m0p5_t10 = 2.0907174051554846;
inline constexpr double kCirScale_a1_b1_c1_x0p5 = 0.59962032299535866;
inline constexpr double kCirScale_a1_b1_c1_x3 = 17.549321426187097;
inline constexpr double kCirScale_a2_b0p5_c1_x1 = 0.55621634190311257;
inline constexpr double kOuPhiRatio_a1_beta2_d0p5_l1em4 = 0.083333331319444466;
inline constexpr double kOuPhiRatio_a1_beta2_d0p5_l0p3 = 0.066841882486434714;
inline constexpr double kOuPhiRatio_a1_beta2_d0p5_l1 = 5.2486652876947956e-3;
inline constexpr double kWilson_7_20_lower = 0.18119182410108206;
inline constexpr double kWilson_7_20_upper = 0.56714572331476374;
inline constexpr double kNormalQuantile99 = 2.5758293035489008;
inline constexpr double kKsCritical_01_1000_2000 = 0.06303759215667289;
inline constexpr double kKsSampleA[] = {0.777302, 0.08443, -2.184834, 0.27816, -0.520105, 0.628933, -1.042974, 0.122638, -0.093398, -0.041592, 0.558721, 1.196342};
inline constexpr double kKsSampleB[] = {1.209076, 0.977656, 1.214271, 0.40361, 1.587502, 0.393914, -0.981608, -0.999413, 0.630712};
inline constexpr double kKsStatisticAB = 0.4444444444444444;
inline constexpr double kPowLog11Ratio = 3.999998000003;
inline constexpr double kLpBound_2_half_4 = 8.4852813742385703;

}  // namespace oracle
