# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled step loop; mirrors aerocell._pykernel operation for operation."""

from libc.math cimport exp, pow, sqrt, M_PI


def run(const double[::1] T_ws, const double[::1] p_0, const double[::1] G_T, prm,
        double[::1] p_hover, double[::1] p_pv, double[::1] p_total, double[::1] e_batt,
        double[::1] e_in, double[::1] e_out, double[::1] unmet, signed char[::1] replaced):
    cdef Py_ssize_t i, n = T_ws.shape[0]
    cdef double h_uav = prm.h_uav, h_pv = prm.h_pv, h_T = prm.h_T, h_WS = prm.h_WS
    cdef double h_0 = prm.h_0, lapse = prm.lapse
    cdef double R_d = prm.R_d, R_v = prm.R_v, R_u = prm.R_u, m_air = prm.m_air
    cdef double g_0 = prm.g_0, r_e = prm.r_e
    cdef double m_total = prm.m_total, r_p = prm.r_p, l_p = prm.l_p
    cdef double p_other = prm.p_other, denom = 1.0 - prm.sigma_dc, dt_h = prm.dt_h
    cdef bint pv_enabled = prm.pv_enabled
    cdef double pv_scale = prm.pv_scale, G_STC = prm.G_STC, alpha_P = prm.alpha_P
    cdef double T_c_STC = prm.T_c_STC, G_NOCT = prm.G_NOCT, noct_dT = prm.noct_dT
    cdef double mu_mp = prm.mu_mp, tau_alpha = prm.tau_alpha
    cdef double E_max = prm.E_max, floor_ = prm.floor, E_primary = prm.E_primary
    cdef double mu = prm.mu_batt
    cdef bint printed = prm.charge_printed

    cdef double E = E_primary, e_initial = E_primary, swapped_in = 0.0, retired = 0.0
    cdef double carry = 0.0, g_uav, T_a, T_k, p, p_v, rho, weight, ph, ppv, ptot, dE
    cdef double gained, lost, deficit, d, before, delta, x, den, T_c, T_pv, stored, headroom
    cdef double avail, drawn
    cdef double h_abs = h_uav + h_T
    cdef double ph_den0 = 2.0 * M_PI * pow(r_p, 2.0) * l_p

    with nogil:
        g_uav = g_0 * pow(r_e, 2.0) / pow(r_e + h_abs, 2.0)
        for i in range(n):
            T_a = T_ws[i] - lapse * (h_uav + h_T - h_WS)
            T_k = T_a + 273.15
            p = p_0[i] * exp(-g_uav * m_air * (h_uav + h_T - h_0) / (R_u * T_k))
            p_v = 6.1078 * pow(10.0, 7.5 * T_a / (T_a + 237.3)) * 100.0
            rho = (p - p_v) / (R_d * T_k) + p_v / (R_v * T_k)
            weight = m_total * g_uav
            ph = sqrt(pow(weight, 3.0) / (ph_den0 * rho))

            ppv = 0.0
            if pv_enabled and G_T[i] > 0.0:
                T_pv = T_ws[i] - lapse * (h_pv + h_T - h_WS)
                x = noct_dT * (G_T[i] / G_NOCT)
                den = 1.0 + x * (alpha_P * mu_mp / tau_alpha)
                T_c = (T_pv + x * (1.0 - mu_mp * (1.0 - alpha_P * T_c_STC) / tau_alpha)) / den
                ppv = pv_scale * (G_T[i] / G_STC) * (1.0 + alpha_P * (T_c - T_c_STC))
                if ppv < 0.0:
                    ppv = 0.0
            ptot = (ph + p_other) / denom
            dE = (ppv - ptot) * dt_h

            gained = 0.0
            lost = 0.0
            deficit = 0.0
            replaced[i] = 0
            if carry > 0.0:
                retired += E
                E = E_primary
                swapped_in += E
                replaced[i] = 1
                # carried deficit is always a discharge
                avail = E - floor_
                drawn = -carry / mu
                before = E
                if -drawn <= avail:
                    E = E + drawn
                else:
                    deficit = (-drawn - avail) * mu
                    E = floor_
                lost += before - E

            before = E
            d = 0.0
            if dE > 0.0:
                stored = dE * mu
                headroom = E_max - E
                if printed:
                    E = E + (stored if stored > headroom else headroom)
                elif stored >= headroom:
                    E = E_max
                else:
                    E = E + stored
            else:
                avail = E - floor_
                drawn = dE / mu
                if -drawn <= avail:
                    E = E + drawn
                else:
                    d = (-drawn - avail) * mu
                    E = floor_
            delta = E - before
            if delta >= 0.0:
                gained += delta
            else:
                lost -= delta
            carry = deficit + d

            p_hover[i] = ph
            p_pv[i] = ppv
            p_total[i] = ptot
            e_batt[i] = E
            e_in[i] = gained
            e_out[i] = lost
            unmet[i] = carry
    return e_initial, swapped_in, retired
