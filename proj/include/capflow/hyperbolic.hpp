#pragma once

namespace capflow::hyperbolic {

// Area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

// Area of the geodesic sphere of radius r in H^n: omega_{n-1} sinh^{n-1}(r).
double sphere_area(int n, double r);

// Volume of the geodesic ball of radius r in H^n.
double ball_volume(int n, double r);

// Isoperimetric function I with |B_r| = I(|dB_r|).  Closed form for n = 2,
// sphere-area inversion plus ball volume for n >= 3.
double isoperimetric_I(int n, double area);

struct Quermassintegrals {
    double W0 = 0;  // |K|
    double W1 = 0;  // |dK| / n
    double W2 = 0;
};

Quermassintegrals quermassintegrals(int n, double volume, double area,
                                    double sigma1_integral);

}  // namespace capflow::hyperbolic
