/* Row kernels for the forward-Euler steppers.
 * Operation order matches the numpy fallback exactly; build with
 * -ffp-contract=off so no FMA contraction changes rounding. Neighbours are
 * summed in mirror pairs, which keeps the update exactly equivariant under
 * reflections of the grid. */
#ifndef HT_STEPPER_CORE_H
#define HT_STEPPER_CORE_H

#include <stddef.h>

static inline void ht_row1d(const double *restrict u, const double *restrict v,
                            double *restrict un, double *restrict vn, ptrdiff_t n,
                            double inv, double dt, double A, double C, double Q,
                            double S, double d)
{
    ptrdiff_t i;
    double ui, vi, lu, lv;

    ui = u[0]; vi = v[0];
    lu = ((u[1] + u[1]) - 2.0 * ui) * inv;
    lv = ((v[1] + v[1]) - 2.0 * vi) * inv;
    un[0] = ui + dt * (lu + ui * ((1.0 - ui) - Q * vi / (ui + A)));
    vn[0] = vi + dt * (d * lv + S * vi * (1.0 - vi / (ui + C)));

    for (i = 1; i < n - 1; i++) {
        ui = u[i]; vi = v[i];
        lu = ((u[i - 1] + u[i + 1]) - 2.0 * ui) * inv;
        lv = ((v[i - 1] + v[i + 1]) - 2.0 * vi) * inv;
        un[i] = ui + dt * (lu + ui * ((1.0 - ui) - Q * vi / (ui + A)));
        vn[i] = vi + dt * (d * lv + S * vi * (1.0 - vi / (ui + C)));
    }

    i = n - 1;
    ui = u[i]; vi = v[i];
    lu = ((u[i - 1] + u[i - 1]) - 2.0 * ui) * inv;
    lv = ((v[i - 1] + v[i - 1]) - 2.0 * vi) * inv;
    un[i] = ui + dt * (lu + ui * ((1.0 - ui) - Q * vi / (ui + A)));
    vn[i] = vi + dt * (d * lv + S * vi * (1.0 - vi / (ui + C)));
}

static inline void ht_row2d(const double *restrict uN, const double *restrict uC,
                            const double *restrict uS, const double *restrict vN,
                            const double *restrict vC, const double *restrict vS,
                            double *restrict un, double *restrict vn, ptrdiff_t nx,
                            double inv, double dt, double A, double C, double Q,
                            double S, double d)
{
    ptrdiff_t i;
    double ui, vi, lu, lv;

    ui = uC[0]; vi = vC[0];
    lu = ((uN[0] + uS[0]) + (uC[1] + uC[1]) - 4.0 * ui) * inv;
    lv = ((vN[0] + vS[0]) + (vC[1] + vC[1]) - 4.0 * vi) * inv;
    un[0] = ui + dt * (lu + ui * ((1.0 - ui) - Q * vi / (ui + A)));
    vn[0] = vi + dt * (d * lv + S * vi * (1.0 - vi / (ui + C)));

    for (i = 1; i < nx - 1; i++) {
        ui = uC[i]; vi = vC[i];
        lu = ((uN[i] + uS[i]) + (uC[i - 1] + uC[i + 1]) - 4.0 * ui) * inv;
        lv = ((vN[i] + vS[i]) + (vC[i - 1] + vC[i + 1]) - 4.0 * vi) * inv;
        un[i] = ui + dt * (lu + ui * ((1.0 - ui) - Q * vi / (ui + A)));
        vn[i] = vi + dt * (d * lv + S * vi * (1.0 - vi / (ui + C)));
    }

    i = nx - 1;
    ui = uC[i]; vi = vC[i];
    lu = ((uN[i] + uS[i]) + (uC[i - 1] + uC[i - 1]) - 4.0 * ui) * inv;
    lv = ((vN[i] + vS[i]) + (vC[i - 1] + vC[i - 1]) - 4.0 * vi) * inv;
    un[i] = ui + dt * (lu + ui * ((1.0 - ui) - Q * vi / (ui + A)));
    vn[i] = vi + dt * (d * lv + S * vi * (1.0 - vi / (ui + C)));
}

/* Number of entries outside [0, blowup] (NaN counts). */
static inline ptrdiff_t ht_count_bad(const double *restrict x, ptrdiff_t n, double blowup)
{
    ptrdiff_t i, bad = 0;
    for (i = 0; i < n; i++)
        bad += !(x[i] >= 0.0 && x[i] <= blowup);
    return bad;
}

#endif
