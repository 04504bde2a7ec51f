#pragma once

namespace tdiff {

// Closed forms for Brownian motion with constant drift mu and volatility sigma.

// q E_x[int_0^inf exp(-q t) 1{X_t in dz} dt] / dz.
double linear_resolvent_density(double mu, double sigma, double q, double x, double z);

// E_x[exp(-q tau_a)]; q = 0 gives P_x(tau_a < inf).
double linear_fpt_laplace(double mu, double sigma, double q, double x, double a);

// Density of tau_a at t (inverse Gaussian); zero for t <= 0.
double linear_fpt_density(double mu, double sigma, double x, double a, double t);

enum class ExitSide { Lower, Upper };

// E_x[exp(-q tau); X_tau = side] for the exit time tau of [a, b], a <= x <= b.
double linear_two_sided_laplace(double mu, double sigma, double q, double x, double a, double b,
                                ExitSide side);

// Potential density of the process killed at exit from [a, b]; zero outside.
double linear_killed_density(double mu, double sigma, double q, double x, double a, double b,
                             double z);

// Potential density of the process killed at a <= x; zero for z < a.
double linear_killed_onesided_density(double mu, double sigma, double q, double x, double a,
                                      double z);

}  // namespace tdiff
