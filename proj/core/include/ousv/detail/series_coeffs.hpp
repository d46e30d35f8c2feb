#pragma once

#include <array>

namespace ousv::series::detail {

// Maclaurin coefficients in u = lambda^2 for the KL eigenvalue series sums
//
//   b0 = sum 2/(l^2+(n pi)^2)              c0 = sum 4/(l^2+(n pi)^2)^2
//   d0 = sum 8/(l^2+(n pi)^2)^3            f0 = sum 2/((n pi)^2 (l^2+(n pi)^2))
//   g0 = sum 8 (n pi)^2/(l^2+(n pi)^2)^3
//
// Expanding each summand geometrically in u/(n pi)^2 and summing over n gives
// exact zeta-value coefficients, e.g. b_k = (-1)^k 2 zeta(2k+2)/pi^(2k+2).
// Radius of convergence is pi^2; with 28 terms the truncation at the
// evaluation cutoff u = 2.25 (lambda = 1.5) is below 5e-18 relative. The
// closed forms take over beyond the cutoff, where they no longer suffer the
// catastrophic cancellation that makes them unusable in doubles near zero.

inline constexpr double kSeriesCutoff = 1.5;  // switch lambda for series vs closed form

inline constexpr std::array<double, 28> kB0Series = {
    0.33333333333333333,    -0.022222222222222222,  0.0021164021164021164,
    -0.00021164021164021164, 2.1377799155576933e-5,  -2.1644042808063972e-6,
    2.1925947851873778e-7,  -2.2214608789979679e-8,  2.2507846516808993e-9,
    -2.2805151204592183e-10, 2.3106432599002624e-11, -2.3411706819824884e-12,
    2.3721017400233654e-13, -2.4034415333307706e-14, 2.4351954029183369e-15,
    -2.4673688045172075e-16, 2.4999672771220809e-17, -2.5329964357406348e-18,
    2.5664619702826287e-19, -2.6003696460137274e-20, 2.6347253044153801e-21,
    -2.6695348641573950e-22, 2.7048043221090310e-23, -2.7405397543699513e-24,
    2.7767473173164435e-25, -2.8134332486618794e-26, 2.8506038685312918e-27,
    -2.8882655805501748e-28};

inline constexpr std::array<double, 28> kC0Series = {
    0.044444444444444444,   -0.0084656084656084656, 0.0012698412698412698,
    -0.00017102239324461547, 2.1644042808063972e-5,  -2.6311137422248533e-6,
    3.1100452305971551e-7,  -3.6012554426894389e-8,  4.1049272168265929e-9,
    -4.6212865198005248e-10, 5.1505755003614745e-11, -5.6930441760560770e-12,
    6.2489479866600036e-13, -6.8185471281713432e-14, 7.4021064135516224e-15,
    -7.9998952867906589e-16, 8.6121878815181584e-17, -9.2392630930174632e-18,
    9.8814046548521640e-19, -1.0538901217661521e-19, 1.1212046429461059e-20,
    -1.1901139017279736e-21, 1.2606482870101776e-22, -1.3328387123118929e-23,
    1.4067166243309397e-24, -1.4823140116362717e-25, 1.5596634134970944e-26,
    -1.6387979288506984e-27};

inline constexpr std::array<double, 28> kD0Series = {
    0.0084656084656084656,  -0.0025396825396825397, 0.00051306717973384640,
    -8.6576171232255888e-5,  1.3155568711124267e-5,  -1.8660271383582930e-6,
    2.5208788098826072e-7,  -3.2839417734612743e-8,  4.1591578678204723e-9,
    -5.1505755003614745e-10, 6.2623485936616847e-11, -7.4987375839920043e-12,
    8.8641112666227462e-13, -1.0362948978972271e-13, 1.1999842930185988e-14,
    -1.3779500610429053e-15, 1.5706747258129687e-16, -1.7786528378733895e-17,
    2.0023912313556889e-18, -2.2424092858922118e-19, 2.4992391936287446e-20,
    -2.7734262314223908e-21, 3.0655290383173536e-22, -3.3761198983942552e-23,
    3.7057850290906793e-24, -4.0551248750924454e-25, 4.4247544078968857e-26,
    -4.8153034311511677e-27};

inline constexpr std::array<double, 28> kF0Series = {
    0.022222222222222222,   -0.0021164021164021164, 0.00021164021164021164,
    -2.1377799155576933e-5,  2.1644042808063972e-6,  -2.1925947851873778e-7,
    2.2214608789979679e-8,  -2.2507846516808993e-9,  2.2805151204592183e-10,
    -2.3106432599002624e-11, 2.3411706819824884e-12, -2.3721017400233654e-13,
    2.4034415333307706e-14, -2.4351954029183369e-15, 2.4673688045172075e-16,
    -2.4999672771220809e-17, 2.5329964357406348e-18, -2.5664619702826287e-19,
    2.6003696460137274e-20, -2.6347253044153801e-21, 2.6695348641573950e-22,
    -2.7048043221090310e-23, 2.7405397543699513e-24, -2.7767473173164435e-25,
    2.8134332486618794e-26, -2.8506038685312918e-27, 2.8882655805501748e-28,
    -2.9264248729476758e-29};

inline constexpr std::array<double, 28> kG0Series = {
    0.088888888888888889,   -0.025396825396825397,  0.0050793650793650794,
    -0.00085511196622307733, 0.00012986425684838383, -1.8417796195573973e-5,
    2.4880361844777241e-6,  -3.2411298984204950e-7,  4.1049272168265929e-8,
    -5.0834151717805773e-9,  6.1806906004337694e-10, -7.4009574288729001e-11,
    8.7485271813240050e-12, -1.0227820692257015e-12, 1.1843370261682596e-13,
    -1.3599821987544120e-14, 1.5501938186732685e-15, -1.7554599876733180e-16,
    1.9762809309704328e-17, -2.2131692557089193e-18, 2.4666502144814329e-19,
    -2.7372619739743394e-20, 3.0255558888244263e-21, -3.3320967807797322e-22,
    3.6574632232604432e-23, -4.0022478314179337e-24, 4.3670575577918643e-25,
    -4.7525139936670254e-26};

}  // namespace ousv::series::detail
