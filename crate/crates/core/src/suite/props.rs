//! Registry cases for the Killing and ssm-Killing statements on warped and
//! multiply warped products, keyed by corpus manifest name.
//!
//! Sufficiency statements sample `X` satisfying their side conditions and
//! test the product-level form `g(∇̄_X ζ, X)`. Necessity statements sample
//! `X` inside one block, take the product-level premise as a hypothesis at
//! that `X`, and test the factor-level form.

use std::sync::Arc;

use crate::fieldexpr::{Block, FieldExpr};
use crate::manifest::Manifest;
use crate::report::Expectation;
use crate::spacetime::SpacetimeKind;

use super::build::*;
use super::context::values;
use super::sampler::{VecFn, VectorJob};
use super::{rel, Case, Sample, TolClass};

const B: Block = Block::Base;

pub(super) fn cases(m: &Manifest) -> Vec<Case> {
    let mut out = Vec::new();
    match m.name.as_str() {
        "interval" => interval(m, &mut out),
        "interval_lorentz" => interval_lorentz(m, &mut out),
        "grw_exp" => grw(m, &mut out, true),
        "grw_poly" => grw(m, &mut out, false),
        "static" => static_st(m, &mut out),
        "wp_fiber" => wp_fiber(m, &mut out),
        "mw2_base" => mw2_base(m, &mut out, false),
        "mw2_base_gap" => mw2_base(m, &mut out, true),
        "mw2_fiber" => mw2_fiber(m, &mut out),
        "mw3_zero" => mw3_zero(m, &mut out),
        _ => {}
    }
    if m.spacetime.is_some() {
        out.push(spacetime_case(m));
    }
    out
}

fn interval(m: &Manifest, out: &mut Vec<Case>) {
    let a = Z::of("zeta_a");
    let t = Z::of("zeta_t");
    out.push(Case::new(
        "Def3.4",
        m,
        "zeta_a",
        TolClass::Alg,
        killing_matrix(&a),
    ));
    out.push(Case::new("Def3.4", m, "zeta_t", TolClass::Alg, killing_matrix(&t)).control());
    out.push(Case::new(
        "Def3.6",
        m,
        "zeta_a",
        TolClass::Alg,
        ssm_killing_matrix(&a),
    ));
    out.push(Case::new("Def3.6", m, "zeta_t", TolClass::Alg, ssm_killing_matrix(&t)).control());

    // Both forms vanish for a∂t; for u∂t the ssm form is u̇ v².
    let both: VecFn = zvec(&a, |c, zj, x| {
        c.ssm_form(zj, x).abs().max(c.lc_form(zj, x).abs())
    });
    out.push(
        job_case(
            m,
            "Example3.12",
            "zeta_a",
            VectorJob::new(both).hyp(zpt(&a, |_, zj| zj[0].d(0))),
        )
        .hyp("u constant"),
    );
    let both_t: VecFn = zvec(&t, |c, zj, x| {
        c.ssm_form(zj, x).abs().max(c.lc_form(zj, x).abs())
    });
    out.push(
        job_case(
            m,
            "Example3.12",
            "zeta_t",
            VectorJob::new(both_t).hyp(zpt(&t, |_, zj| zj[0].d(0))),
        )
        .control()
        .hyp("u constant"),
    );
    for name in ["zeta_a", "zeta_t", "zeta_sq", "zeta_cbrt"] {
        let f = zvec(&Z::of(name), |c, zj, x| {
            rel(c.ssm_form(zj, x), zj[0].d(0) * x[0] * x[0])
        });
        out.push(job_case(
            m,
            "Example3.12",
            format!("{name}, ssm form = u' v^2"),
            VectorJob::new(f),
        ));
    }
    for name in ["zeta_a", "zeta_t", "zeta_sq"] {
        out.push(prop310(m, name, false));
    }
}

fn interval_lorentz(m: &Manifest, out: &mut Vec<Case>) {
    let a = Z::of("zeta_a");
    let t = Z::of("zeta_t");
    out.push(Case::new(
        "Def3.4",
        m,
        "zeta_a",
        TolClass::Alg,
        killing_matrix(&a),
    ));
    out.push(Case::new(
        "Def3.6",
        m,
        "zeta_a",
        TolClass::Alg,
        ssm_killing_matrix(&a),
    ));
    out.push(Case::new("Def3.6", m, "zeta_t", TolClass::Alg, ssm_killing_matrix(&t)).control());
    out.push(prop310(m, "zeta_t", false));
}

/// `π(ζ)‖X‖² − π(X) g(X, ζ)`, the condition under which both forms agree.
fn prop310_side(z: &Z) -> VecFn {
    zvec(z, |c, zj, x| {
        c.pi(&values(zj)) * c.norm2(x) - c.pi(x) * c.inner(x, &values(zj))
    })
}

fn prop310(m: &Manifest, name: &str, control: bool) -> Case {
    let z = Z::of(name);
    let diff = zvec(&z, |c, zj, x| c.ssm_form(zj, x) - c.lc_form(zj, x));
    let mut job = VectorJob::new(diff).side(prop310_side(&z), Block::Full);
    let mut label = name.to_string();
    if control {
        job = job.violate();
        label.push_str(", X off the side condition");
    }
    let c = job_case(m, "Prop3.10", label, job).hyp("pi(zeta)|X|^2 = pi(X) g(X, zeta)");
    if control {
        c.control()
    } else {
        c
    }
}

/// `ζ_1(f) + f π(ζ_1)` on a singly warped product.
fn c1(c: &super::PointCtx<'_>, zj: &[crate::jets::Jet2]) -> f64 {
    zb_f(c, zj, 0) + c.fv(0) * pi_part(c, zj, B)
}

/// `π(X_1) g_2(X_2, ζ_2)`.
fn base_pi_fiber_g(z: &Z) -> VecFn {
    zvec(z, |c, zj, x| pi_x(c, B, x) * gz(c, zj, fib(0), x))
}

fn grw(m: &Manifest, out: &mut Vec<Case>, exp: bool) {
    let f0 = fib(0);
    let base = Z::of("zeta_base");
    let rot = Z::of("zeta_rot");
    let zeta = Z::of("zeta");

    let h1 = "zeta_1 ssm-Killing on the base, zeta_1(f) + f pi(zeta_1) = 0";
    let j1 = |z: &Z| {
        VectorJob::new(ssm_form(z))
            .hyp(factor_killing(z, B, true))
            .hyp(zpt(z, c1))
    };
    if exp {
        out.push(job_case(m, "Prop3.17.1", "zeta_base", j1(&base)).hyp(h1));
        out.push(
            job_case(m, "Prop3.17.1", "zeta_tt", j1(&Z::of("zeta_tt")))
                .control()
                .hyp(h1),
        );
    } else {
        out.push(
            job_case(m, "Prop3.17.1", "zeta_base", j1(&base))
                .expect(Expectation::Violated)
                .hyp(h1),
        );
    }

    let h2 = "zeta_2 Killing on the fiber, pi(X_1) g_2(X_2, zeta_2) = 0";
    let j2 = |z: &Z| {
        VectorJob::new(ssm_form(z))
            .hyp(factor_killing(z, f0, false))
            .side(base_pi_fiber_g(z), f0)
    };
    with_control(out, m, "Prop3.17.2", "zeta_rot", h2, j2(&rot));
    if exp {
        out.push(
            job_case(m, "Prop3.17.2", "zeta_dil", j2(&Z::of("zeta_dil")))
                .control()
                .hyp(h2),
        );
    }

    let h3 = "both parts Killing as in (1) and (2), both conditions";
    let j3 = |z: &Z| {
        VectorJob::new(ssm_form(z))
            .hyp(factor_killing(z, B, true))
            .hyp(factor_killing(z, f0, false))
            .hyp(zpt(z, c1))
            .side(base_pi_fiber_g(z), f0)
    };
    if exp {
        with_control(out, m, "Prop3.17.3", "zeta", h3, j3(&zeta));
        out.push(
            job_case(m, "Prop3.17.3", "zeta_mixed", j3(&Z::of("zeta_mixed")))
                .control()
                .hyp(h3),
        );
    } else {
        out.push(
            job_case(m, "Prop3.17.3", "zeta", j3(&zeta))
                .expect(Expectation::Violated)
                .hyp(h3),
        );
    }

    if exp {
        let nec1 = VectorJob::new(factor_form(&zeta, B, true))
            .support(&[B])
            .vec_hyp(ssm_form(&zeta));
        out.push(job_case(m, "Prop3.18.1", "zeta", nec1).hyp("zeta ssm-Killing (X in the base)"));
        let ttrot = Z::of("zeta_ttrot");
        let n1c = VectorJob::new(factor_form(&ttrot, B, true))
            .support(&[B])
            .vec_hyp(ssm_form(&ttrot));
        out.push(
            job_case(m, "Prop3.18.1", "zeta_ttrot", n1c)
                .control()
                .hyp("zeta ssm-Killing"),
        );

        let nec2 = |z: &Z| {
            VectorJob::new(factor_form(z, f0, false))
                .support(&[f0])
                .hyp(zpt(z, c1))
                .vec_hyp(ssm_form(z))
        };
        let h = "zeta ssm-Killing (X in the fiber), zeta_1(f) + f pi(zeta_1) = 0";
        out.push(job_case(m, "Prop3.18.2", "zeta", nec2(&zeta)).hyp(h));
        out.push(
            job_case(m, "Prop3.18.2", "zeta_mixed", nec2(&Z::of("zeta_mixed")))
                .control()
                .hyp(h),
        );
    }

    // ζ = a∂t + ζ_2 for a, u ∈ {±1, ±2}.
    let a0 = constant(m, "a");
    let h20 = "zeta_2 Killing, f = e^t, g_2(X_2, zeta_2) = 0 (u fixed)";
    for a in [1.0, -1.0, 2.0, -2.0] {
        let z = Z::sum(&[("zeta_base", a / a0), ("zeta_rot", 1.0)]);
        let job = VectorJob::new(ssm_form(&z))
            .fixed(0, &[1.0, -1.0, 2.0, -2.0])
            .hyp(factor_killing(&z, f0, false))
            .hyp(Arc::new(|c| Ok(c.f[0].d(0) - c.fv(0))))
            .side(zvec(&z, move |c, zj, x| gz(c, zj, f0, x)), f0);
        let label = format!("a={a}");
        if exp {
            with_control(out, m, "Prop3.20", &label, h20, job);
        } else {
            out.push(
                job_case(m, "Prop3.20", label, job)
                    .expect(Expectation::Violated)
                    .hyp(h20),
            );
        }
    }

    if exp {
        out.push(prop310(m, "zeta_rot", false));
        out.push(prop310(m, "zeta_base", true));
    }
}

fn static_st(m: &Manifest, out: &mut Vec<Case>) {
    let f0 = fib(0);
    let t_idx = m.structure.block_range(f0).start;

    // f ζ_1(f) ‖X_2‖²_2 − π(X_2) g_1(X_1, ζ_1)
    let side1 = |z: &Z| {
        zvec(z, move |c, zj, x| {
            c.fv(0) * zb_f(c, zj, 0) * n2(c, f0, x) - pi_x(c, f0, x) * gz(c, zj, B, x)
        })
    };
    for name in ["zeta1", "zeta1_rot"] {
        let z = Z::of(name);
        let job = VectorJob::new(ssm_form(&z))
            .hyp(factor_killing(&z, B, false))
            .side(side1(&z), B);
        with_control(
            out,
            m,
            "Prop3.21.1",
            name,
            "zeta_1 Killing, f zeta_1(f)|X_2|^2 = pi(X_2) g_1(X_1, zeta_1)",
            job,
        );
    }

    let z2 = Z::of("zeta2");
    // π(ζ_2)‖X‖² − f² π(X_2) g_2(X_2, ζ_2) reduces to −a f² ‖X_1‖², so X stays in the fiber.
    let side2 = zvec(&z2, move |c, zj, x| {
        pi_part(c, zj, f0) * c.norm2(x) - c.fv(0).powi(2) * pi_x(c, f0, x) * gz(c, zj, f0, x)
    });
    let job2 = VectorJob::new(ssm_form(&z2))
        .hyp(factor_killing(&z2, f0, false))
        .side(side2, f0);
    let h2 = "zeta_2 Killing, pi(zeta_2)|X|^2 = f^2 pi(X_2) g_2(X_2, zeta_2)";
    out.push(
        job_case(
            m,
            "Prop3.21.2",
            "zeta2, X in the fiber",
            job2.clone().support(&[f0]),
        )
        .hyp(h2),
    );
    out.push(
        job_case(
            m,
            "Prop3.21.2",
            "zeta2, X off the side condition",
            job2.violate(),
        )
        .control()
        .hyp(h2),
    );

    let z = Z::of("zeta");
    let side3 = zvec(&z, move |c, zj, x| {
        c.fv(0) * zb_f(c, zj, 0) * n2(c, f0, x) + pi_part(c, zj, f0) * c.norm2(x)
            - pi_x(c, f0, x) * c.inner(x, &values(zj))
    });
    let job3 = VectorJob::new(ssm_form(&z))
        .hyp(factor_killing(&z, B, false))
        .hyp(factor_killing(&z, f0, false))
        .side(side3, B);
    with_control(
        out,
        m,
        "Prop3.21.3",
        "zeta",
        "both parts Killing, combined condition",
        job3,
    );

    // Necessity with π(ζ_2) = 0.
    let z1 = Z::of("zeta1");
    let nec1 = VectorJob::new(factor_form(&z1, B, false))
        .support(&[B])
        .hyp(zpt(&z1, move |c, zj| pi_part(c, zj, f0)))
        .vec_hyp(ssm_form(&z1));
    out.push(
        job_case(m, "Prop3.22.1", "zeta1", nec1)
            .hyp("zeta ssm-Killing (X in the base), pi(zeta_2) = 0"),
    );

    // ζ = ζ_1 + a'∂t with ζ_1 a rotation, u = X^t fixed.
    let a0 = constant(m, "a");
    for a in [1.0, -1.0, 2.0, -2.0] {
        let z = Z::sum(&[("zeta1_rot", 1.0), ("zeta2", a / a0)]);
        let side = zvec(&z, move |c, zj, x| {
            let u = x[t_idx];
            let f = c.fv(0);
            u * f * gz(c, zj, B, x) - u * u * zb_f(c, zj, 0) - a * f * n2(c, B, x)
        });
        let job = VectorJob::new(ssm_form(&z))
            .fixed(t_idx, &[1.0, -1.0, 2.0, -2.0])
            .hyp(factor_killing(&z, B, false))
            .side(side, B);
        with_control(
            out,
            m,
            "Prop3.24",
            &format!("a={a}"),
            "zeta_1 Killing, u f g_1(X_1, zeta_1) - u^2 zeta_1(f) - a f |X_1|^2 = 0",
            job,
        );
    }
}

fn wp_fiber(m: &Manifest, out: &mut Vec<Case>) {
    let f0 = fib(0);
    let z = Z::of("zeta");
    let nec1 = VectorJob::new(factor_form(&z, B, false))
        .support(&[B])
        .hyp(zpt(&z, move |c, zj| pi_part(c, zj, f0)))
        .vec_hyp(ssm_form(&z));
    out.push(
        job_case(m, "Prop3.22.1", "zeta", nec1)
            .hyp("zeta ssm-Killing (X in the base), pi(zeta_2) = 0"),
    );
    let usq = Z::of("zeta_usq");
    let nec1_usq = VectorJob::new(factor_form(&usq, B, false))
        .support(&[B])
        .hyp(zpt(&usq, move |c, zj| pi_part(c, zj, f0)))
        .vec_hyp(ssm_form(&usq));
    out.push(
        job_case(m, "Prop3.22.1", "zeta_usq", nec1_usq)
            .control()
            .hyp("zeta ssm-Killing (X in the base), pi(zeta_2) = 0"),
    );

    // f ζ_1(f) ‖X_2‖²_2 − π(X_2) g(X, ζ)
    let nec2 = |z: &Z| {
        let side = zvec(z, move |c, zj, x| {
            c.fv(0) * zb_f(c, zj, 0) * n2(c, f0, x) - pi_x(c, f0, x) * c.inner(x, &values(zj))
        });
        VectorJob::new(factor_form(z, f0, false))
            .support(&[f0])
            .hyp(zpt(z, move |c, zj| pi_part(c, zj, f0)))
            .vec_hyp(ssm_form(z))
            .side(side, f0)
    };
    let h = "zeta ssm-Killing (X in the fiber), pi(zeta_2) = 0, f zeta_1(f)|X_2|^2 = pi(X_2) g(X, zeta)";
    out.push(job_case(m, "Prop3.22.2", "zeta", nec2(&z)).hyp(h));
    out.push(
        job_case(m, "Prop3.22.2", "zeta_dil", nec2(&Z::of("zeta_dil")))
            .control()
            .hyp(h),
    );

    out.push(prop310(m, "zeta_w", false));
}

/// `c_i = f_i ζ_B(f_i) + f_i² π(ζ_B)` for base-located `P`.
fn ci(c: &super::PointCtx<'_>, zj: &[crate::jets::Jet2], i: usize) -> f64 {
    c.fv(i) * zb_f(c, zj, i) + c.fv(i).powi(2) * pi_part(c, zj, B)
}

fn mw2_base(m: &Manifest, out: &mut Vec<Case>, gap: bool) {
    let nf = m.structure.m();
    let fibers: Vec<Block> = (0..nf).map(fib).collect();
    let all_fibers_killing = |mut job: VectorJob, z: &Z| {
        for b in (0..nf).map(fib) {
            job = job.hyp(factor_killing(z, b, false));
        }
        job
    };
    // Σ c_i ‖X_i‖²_i
    let sum_c = |z: &Z| {
        zvec(z, move |c, zj, x| {
            (0..nf).map(|i| ci(c, zj, i) * n2(c, fib(i), x)).sum()
        })
    };
    // f_i² π(X_B) g_i(X_i, ζ_i)
    let cross = |c: &super::PointCtx<'_>, zj: &[crate::jets::Jet2], i: usize, x: &[f64]| {
        c.fv(i).powi(2) * pi_x(c, B, x) * gz(c, zj, fib(i), x)
    };

    // (1)
    let zb = Z::of("zeta_B");
    let h1 = "zeta_B ssm-Killing, sum_i c_i |X_i|^2 = 0";
    let j1 = |z: &Z| {
        VectorJob::new(ssm_form(z))
            .hyp(factor_killing(z, B, true))
            .side(sum_c(z), fib(0))
    };
    if gap {
        out.push(
            job_case(
                m,
                "Prop4.7.1",
                "zeta_B, X in B+M1",
                j1(&zb).support(&[B, fib(0)]),
            )
            .hyp(h1),
        );
        out.push(
            job_case(
                m,
                "Prop4.7.1",
                "zeta_B, X off the side condition",
                j1(&zb).violate(),
            )
            .control()
            .hyp(h1),
        );
    } else {
        out.push(job_case(m, "Prop4.7.1", "zeta_B", j1(&zb)).hyp(h1));
        out.push(
            job_case(m, "Prop4.7.1", "zeta_B2", j1(&Z::of("zeta_B2")))
                .control()
                .hyp(h1),
        );
    }

    if !gap {
        // (2)
        let h2 = "zeta_i Killing, pi(X_B) g_i(X_i, zeta_i) = 0";
        for (i, name) in ["zeta_1", "zeta_2"].iter().enumerate() {
            let z = Z::of(name);
            let job = VectorJob::new(ssm_form(&z))
                .hyp(factor_killing(&z, fib(i), false))
                .side(
                    zvec(&z, move |c, zj, x| pi_x(c, B, x) * gz(c, zj, fib(i), x)),
                    fib(i),
                );
            if i == 0 {
                with_control(out, m, "Prop4.7.2", name, h2, job);
            } else {
                out.push(job_case(m, "Prop4.7.2", *name, job).hyp(h2));
            }
        }
        let zd = Z::of("zeta_1dil");
        let jd = VectorJob::new(ssm_form(&zd))
            .hyp(factor_killing(&zd, fib(0), false))
            .side(
                zvec(&zd, |c, zj, x| pi_x(c, B, x) * gz(c, zj, fib(0), x)),
                fib(0),
            );
        out.push(job_case(m, "Prop4.7.2", "zeta_1dil", jd).control().hyp(h2));
    }

    // (3) with i = 1: [ζ_B(f_1) + f_1 π(ζ_B)] ‖X_1‖² − f_1 π(X_B) g_1(X_1, ζ_1) = 0.
    let z3 = Z::of("zeta_B1");
    let side3 = zvec(&z3, |c, zj, x| {
        (zb_f(c, zj, 0) + c.fv(0) * pi_part(c, zj, B)) * n2(c, fib(0), x)
            - c.fv(0) * pi_x(c, B, x) * gz(c, zj, fib(0), x)
    });
    let j3 = VectorJob::new(ssm_form(&z3))
        .hyp(factor_killing(&z3, B, true))
        .hyp(factor_killing(&z3, fib(0), false))
        .side(side3, fib(0));
    let h3 = "zeta_B ssm-Killing, zeta_1 Killing, condition for i = 1 only";
    if gap {
        out.push(
            job_case(m, "Prop4.7.3", "zeta_B1", j3.clone())
                .expect(Expectation::Counterexample)
                .hyp(h3),
        );
        out.push(
            job_case(
                m,
                "Prop4.7.3",
                "zeta_B1, X in B+M1",
                j3.support(&[B, fib(0)]),
            )
            .hyp(h3),
        );
    } else {
        with_control(out, m, "Prop4.7.3", "zeta_B1", h3, j3);
    }

    // (4) summed and per-i.
    if !gap {
        let z4 = Z::of("zeta_12");
        let h4 = "each zeta_i Killing, sum_i f_i^2 pi(X_B) g_i(X_i, zeta_i) = 0";
        let j4 = all_fibers_killing(VectorJob::new(ssm_form(&z4)), &z4).side(
            zvec(&z4, move |c, zj, x| {
                (0..nf).map(|i| cross(c, zj, i, x)).sum()
            }),
            fib(0),
        );
        with_control(out, m, "Prop4.7.4", "zeta_12", h4, j4);
        let mut j4i = all_fibers_killing(VectorJob::new(ssm_form(&z4)), &z4);
        for i in 0..nf {
            j4i = j4i.side(zvec(&z4, move |c, zj, x| cross(c, zj, i, x)), fib(i));
        }
        with_control(
            out,
            m,
            "Prop4.7.4i",
            "zeta_12",
            "each zeta_i Killing, condition for every i",
            j4i,
        );
    }

    // (5) summed and per-i.
    let z5 = Z::of("zeta");
    let h5 = "zeta_B ssm-Killing, each zeta_i Killing, sum_i [c_i |X_i|^2 - f_i^2 pi(X_B) g_i(X_i, zeta_i)] = 0";
    let j5 = all_fibers_killing(
        VectorJob::new(ssm_form(&z5)).hyp(factor_killing(&z5, B, true)),
        &z5,
    )
    .side(
        zvec(&z5, move |c, zj, x| {
            (0..nf)
                .map(|i| ci(c, zj, i) * n2(c, fib(i), x) - cross(c, zj, i, x))
                .sum()
        }),
        fib(0),
    );
    with_control(out, m, "Prop4.7.5", "zeta", h5, j5);
    if !gap {
        let mut j5i = all_fibers_killing(
            VectorJob::new(ssm_form(&z5)).hyp(factor_killing(&z5, B, true)),
            &z5,
        );
        for i in 0..nf {
            j5i = j5i.side(
                zvec(&z5, move |c, zj, x| {
                    ci(c, zj, i) * n2(c, fib(i), x) - cross(c, zj, i, x)
                }),
                fib(i),
            );
        }
        with_control(out, m, "Prop4.7.5i", "zeta", "condition for every i", j5i);

        // Necessity.
        let nec1 = |z: &Z| {
            VectorJob::new(factor_form(z, B, true))
                .support(&[B])
                .vec_hyp(ssm_form(z))
        };
        out.push(
            job_case(m, "Prop4.8.1", "zeta", nec1(&z5)).hyp("zeta ssm-Killing (X in the base)"),
        );
        out.push(
            job_case(m, "Prop4.8.1", "zeta_div", nec1(&Z::of("zeta_div")))
                .control()
                .hyp("zeta ssm-Killing"),
        );
        let nec2 = |z: &Z| {
            VectorJob::new(factor_forms(z, &fibers))
                .support(&fibers)
                .vec_hyp(ssm_form(z))
                .side(sum_c(z), fib(0))
        };
        let h = "zeta ssm-Killing (X in the fibers), sum_i c_i |X_i|^2 = 0";
        out.push(job_case(m, "Prop4.8.2", "zeta", nec2(&z5)).hyp(h));
        out.push(
            job_case(m, "Prop4.8.2", "zeta_div", nec2(&Z::of("zeta_div")))
                .control()
                .hyp(h),
        );
    }
}

fn mw2_fiber(m: &Manifest, out: &mut Vec<Case>) {
    let r = fib(0);
    let nf = m.structure.m();
    let fibers: Vec<Block> = (0..nf).map(fib).collect();
    let w_idx = m.structure.block_range(r).start + 1;
    let cx = Expectation::Counterexample;

    // (1) with g_B(X_B, ζ_B) in place of g_B(X_B, Y_B).
    let h1 = "zeta_B Killing, sum_i [f_i zeta_B(f_i)|X_i|^2 - pi(X_i) g_B(X_B, zeta_B)] = 0";
    for name in ["zeta_Bv", "zeta_Bu"] {
        let z = Z::of(name);
        let side = zvec(&z, move |c, zj, x| {
            (0..nf)
                .map(|i| {
                    c.fv(i) * zb_f(c, zj, i) * n2(c, fib(i), x)
                        - pi_x(c, fib(i), x) * gz(c, zj, B, x)
                })
                .sum()
        });
        let job = VectorJob::new(ssm_form(&z))
            .hyp(factor_killing(&z, B, false))
            .side(side, B);
        with_control(out, m, "Prop4.9.1", name, h1, job);
    }

    // (2) i ≠ r: no side condition as written.
    let z2 = Z::of("zeta_2");
    let j2 = VectorJob::new(ssm_form(&z2)).hyp(factor_killing(&z2, fib(1), false));
    let h2 = "zeta_i Killing, i != r";
    out.push(
        job_case(m, "Prop4.9.2", "zeta_2", j2.clone())
            .expect(cx)
            .hyp(h2),
    );
    out.push(
        job_case(
            m,
            "Prop4.9.2",
            "zeta_2, X without the M_r part",
            j2.support(&[B, fib(1)]),
        )
        .hyp(h2),
    );

    // (2) i = r: π(ζ_r)‖X_r‖²_r − π(X_r) g_r(X_r, ζ_r) = 0.
    let side2r = |z: &Z| {
        zvec(z, move |c, zj, x| {
            pi_part(c, zj, r) * n2(c, r, x) - pi_x(c, r, x) * gz(c, zj, r, x)
        })
    };
    let h2r = "zeta_r Killing, pi(zeta_r)|X_r|^2 = pi(X_r) g_r(X_r, zeta_r)";
    let zrw = Z::of("zeta_rw");
    let jrw = VectorJob::new(ssm_form(&zrw))
        .hyp(factor_killing(&zrw, r, false))
        .side(side2r(&zrw), r);
    with_control(out, m, "Prop4.9.2r", "zeta_rw", h2r, jrw);
    // For ζ_r = P the condition reads f² w² = 0, so w is pinned.
    let zrz = Z::of("zeta_rz");
    let jrz = VectorJob::new(ssm_form(&zrz))
        .fixed(w_idx, &[0.0])
        .hyp(factor_killing(&zrz, r, false))
        .side(side2r(&zrz), r);
    out.push(
        job_case(m, "Prop4.9.2r", "zeta_rz", jrz.clone())
            .expect(cx)
            .hyp(h2r),
    );
    out.push(job_case(m, "Prop4.9.2r", "zeta_rz, X in M_r", jrz.support(&[r])).hyp(h2r));

    // (3) i ≠ r.
    let z3 = Z::of("zeta_Bv2");
    let j3 = VectorJob::new(ssm_form(&z3))
        .hyp(factor_killing(&z3, B, false))
        .hyp(factor_killing(&z3, fib(1), false))
        .hyp(zpt(&z3, |c, zj| zb_f(c, zj, 1)));
    let h3 = "zeta_B, zeta_i Killing, zeta_B(f_i) = 0, i != r";
    out.push(
        job_case(m, "Prop4.9.3", "zeta_Bv2", j3.clone())
            .expect(cx)
            .hyp(h3),
    );
    out.push(
        job_case(
            m,
            "Prop4.9.3",
            "zeta_Bv2, X in B+M_i",
            j3.support(&[B, fib(1)]),
        )
        .hyp(h3),
    );

    // (3) i = r.
    let h3r = "zeta_B, zeta_r Killing, zeta_B(f_r)|X_r|^2 + f_r pi(zeta_r)|X_r|^2 - f_r pi(X_r) g_r(X_r, zeta_r) = 0";
    let j3r = |z: &Z| {
        let side = zvec(z, move |c, zj, x| {
            let f = c.fv(0);
            zb_f(c, zj, 0) * n2(c, r, x) + f * pi_part(c, zj, r) * n2(c, r, x)
                - f * pi_x(c, r, x) * gz(c, zj, r, x)
        });
        VectorJob::new(ssm_form(z))
            .hyp(factor_killing(z, B, false))
            .hyp(factor_killing(z, r, false))
            .side(side, r)
    };
    let zbvr = Z::of("zeta_Bvr");
    out.push(
        job_case(m, "Prop4.9.3r", "zeta_Bvr", j3r(&zbvr))
            .expect(cx)
            .hyp(h3r),
    );
    out.push(
        job_case(
            m,
            "Prop4.9.3r",
            "zeta_Bvr, X in M_r",
            j3r(&zbvr).support(&[r]),
        )
        .hyp(h3r),
    );
    out.push(
        job_case(
            m,
            "Prop4.9.3r",
            "zeta_Bvr, X off the side condition",
            j3r(&zbvr).support(&[r]).violate(),
        )
        .control()
        .hyp(h3r),
    );
    let zbvrz = Z::of("zeta_Bvrz");
    out.push(
        job_case(
            m,
            "Prop4.9.3r",
            "zeta_Bvrz, X in M_r",
            j3r(&zbvrz).support(&[r]).fixed(w_idx, &[0.0]),
        )
        .hyp(h3r),
    );

    // (4) summed and per-i; only the M_r part of X is controlled.
    let z4 = Z::of("zeta_fibers");
    let term4 = |c: &super::PointCtx<'_>, zj: &[crate::jets::Jet2], i: usize, x: &[f64]| {
        c.fv(i).powi(2)
            * (pi_part(c, zj, fib(i)) * n2(c, fib(i), x)
                - pi_x(c, fib(i), x) * gz(c, zj, fib(i), x))
    };
    let fk = |mut job: VectorJob, z: &Z| {
        for b in (0..nf).map(fib) {
            job = job.hyp(factor_killing(z, b, false));
        }
        job
    };
    let j4 = fk(VectorJob::new(ssm_form(&z4)), &z4).side(
        zvec(&z4, move |c, zj, x| {
            (0..nf).map(|i| term4(c, zj, i, x)).sum()
        }),
        r,
    );
    let h4 = "each zeta_i Killing, sum_i f_i^2 [pi(zeta_i)|X_i|^2 - pi(X_i) g_i(X_i, zeta_i)] = 0";
    out.push(
        job_case(m, "Prop4.9.4", "zeta_fibers", j4.clone())
            .expect(cx)
            .hyp(h4),
    );
    out.push(
        job_case(
            m,
            "Prop4.9.4",
            "zeta_fibers, X in M_r",
            j4.clone().support(&[r]),
        )
        .hyp(h4),
    );
    out.push(
        job_case(
            m,
            "Prop4.9.4",
            "zeta_fibers, X off the side condition",
            j4.support(&[r]).violate(),
        )
        .control()
        .hyp(h4),
    );
    let mut j4i = fk(VectorJob::new(ssm_form(&z4)), &z4);
    for i in 0..nf {
        j4i = j4i.side(zvec(&z4, move |c, zj, x| term4(c, zj, i, x)), fib(i));
    }
    out.push(
        job_case(m, "Prop4.9.4i", "zeta_fibers", j4i.clone())
            .expect(cx)
            .hyp("condition for every i"),
    );
    out.push(
        job_case(m, "Prop4.9.4i", "zeta_fibers, X in M_r", j4i.support(&[r]))
            .hyp("condition for every i"),
    );

    // (5) summed and per-i.
    let term5 = |c: &super::PointCtx<'_>, zj: &[crate::jets::Jet2], i: usize, x: &[f64]| {
        c.fv(i) * zb_f(c, zj, i) * n2(c, fib(i), x) + pi_part(c, zj, fib(i)) * c.norm2(x)
            - pi_x(c, fib(i), x) * c.inner(x, &values(zj))
    };
    let h5 = "zeta_B, each zeta_i Killing, sum_i [f_i zeta_B(f_i)|X_i|^2 + pi(zeta_i)|X|^2 - pi(X_i) g(X, zeta)] = 0";
    let z5 = Z::of("zeta");
    let j5 = fk(
        VectorJob::new(ssm_form(&z5)).hyp(factor_killing(&z5, B, false)),
        &z5,
    )
    .side(
        zvec(&z5, move |c, zj, x| {
            (0..nf).map(|i| term5(c, zj, i, x)).sum()
        }),
        B,
    );
    with_control(out, m, "Prop4.9.5", "zeta", h5, j5);
    let mut j5i = fk(
        VectorJob::new(ssm_form(&zbvr)).hyp(factor_killing(&zbvr, B, false)),
        &zbvr,
    );
    for i in 0..nf {
        j5i = j5i.side(zvec(&zbvr, move |c, zj, x| term5(c, zj, i, x)), B);
    }
    with_control(
        out,
        m,
        "Prop4.9.5i",
        "zeta_Bvr",
        "condition for every i",
        j5i,
    );

    // Necessity.
    let sum_pi = |z: &Z| {
        zpt(z, move |c, zj| {
            (0..nf).map(|i| pi_part(c, zj, fib(i))).sum()
        })
    };
    let nec1 = |z: &Z| {
        VectorJob::new(factor_form(z, B, false))
            .support(&[B])
            .hyp(sum_pi(z))
            .vec_hyp(ssm_form(z))
    };
    let hn1 = "zeta ssm-Killing (X in the base), sum_i pi(zeta_i) = 0";
    out.push(job_case(m, "Prop4.10.1", "zeta_Bvr", nec1(&zbvr)).hyp(hn1));
    out.push(job_case(m, "Prop4.10.1", "zeta", nec1(&z5)).hyp(hn1));
    out.push(
        job_case(m, "Prop4.10.1", "zeta_div", nec1(&Z::of("zeta_div")))
            .control()
            .hyp(hn1),
    );
    let nec2 = |z: &Z, b: Block| {
        let side = zvec(z, move |c, zj, x| {
            (0..nf)
                .map(|i| {
                    c.fv(i) * zb_f(c, zj, i) * n2(c, fib(i), x)
                        - pi_x(c, fib(i), x) * c.inner(x, &values(zj))
                })
                .sum()
        });
        VectorJob::new(factor_form(z, b, false))
            .support(&[b])
            .hyp(sum_pi(z))
            .vec_hyp(ssm_form(z))
            .side(side, b)
    };
    let hn2 = "zeta ssm-Killing (X in M_i), sum_i pi(zeta_i) = 0, sum_i [f_i zeta_B(f_i)|X_i|^2 - pi(X_i) g(X, zeta)] = 0";
    for (i, b) in fibers.iter().enumerate() {
        out.push(
            job_case(
                m,
                "Prop4.10.2",
                format!("zeta_Bvr, X in M{}", i + 1),
                nec2(&zbvr, *b),
            )
            .hyp(hn2),
        );
    }
    out.push(
        job_case(
            m,
            "Prop4.10.2",
            "zeta_div, X in M1",
            nec2(&Z::of("zeta_div"), r),
        )
        .control()
        .hyp(hn2),
    );
}

fn mw3_zero(m: &Manifest, out: &mut Vec<Case>) {
    let nf = m.structure.m();
    let fibers: Vec<Block> = (0..nf).map(fib).collect();
    let fk = move |mut job: VectorJob, z: &Z| {
        for b in (0..nf).map(fib) {
            job = job.hyp(factor_killing(z, b, false));
        }
        job
    };
    // Σ f_i ζ_B(f_i) ‖X_i‖²_i
    let warp_sum = move |z: &Z| {
        zvec(z, move |c, zj, x| {
            (0..nf)
                .map(|i| c.fv(i) * zb_f(c, zj, i) * n2(c, fib(i), x))
                .sum()
        })
    };

    let zb = Z::of("zeta_B");
    let j1 = VectorJob::new(lc_form(&zb))
        .hyp(factor_killing(&zb, B, false))
        .side(warp_sum(&zb), fib(0));
    with_control(
        out,
        m,
        "Prop5.3.1",
        "zeta_B",
        "zeta_B Killing, sum_i f_i zeta_B(f_i)|X_i|^2 = 0",
        j1,
    );

    for (i, name) in ["zeta_1", "zeta_2", "zeta_3"].iter().enumerate() {
        let z = Z::of(name);
        let job = VectorJob::new(lc_form(&z)).hyp(factor_killing(&z, fib(i), false));
        out.push(job_case(m, "Prop5.3.2", *name, job).hyp("zeta_i Killing"));
    }
    let zd = Z::of("zeta_1dil");
    let jd = VectorJob::new(lc_form(&zd)).hyp(factor_killing(&zd, fib(0), false));
    out.push(
        job_case(m, "Prop5.3.2", "zeta_1dil", jd)
            .control()
            .hyp("zeta_i Killing"),
    );

    let j3 = |z: &Z| {
        VectorJob::new(lc_form(z))
            .hyp(factor_killing(z, B, false))
            .hyp(factor_killing(z, fib(2), false))
            .hyp(zpt(z, |c, zj| zb_f(c, zj, 2)))
    };
    let h3 = "zeta_B, zeta_i Killing, zeta_B(f_i) = 0";
    let z3 = Z::of("zeta_B3");
    out.push(
        job_case(m, "Prop5.3.3", "zeta_B3", j3(&z3))
            .expect(Expectation::Counterexample)
            .hyp(h3),
    );
    out.push(
        job_case(
            m,
            "Prop5.3.3",
            "zeta_B3, X in B+M3",
            j3(&z3).support(&[B, fib(2)]),
        )
        .hyp(h3),
    );
    let z3c = Z::sum(&[("zeta_Bt", 1.0), ("zeta_3", 1.0)]);
    out.push(
        job_case(
            m,
            "Prop5.3.3",
            "zeta_Bt + zeta_3, X in B+M3",
            j3(&z3c).support(&[B, fib(2)]),
        )
        .control()
        .hyp(h3),
    );

    let z4 = Z::of("zeta_fibers");
    out.push(
        job_case(
            m,
            "Prop5.3.4",
            "zeta_fibers",
            fk(VectorJob::new(lc_form(&z4)), &z4),
        )
        .hyp("each zeta_i Killing"),
    );
    let z4c = Z::of("zeta_fibdil");
    out.push(
        job_case(
            m,
            "Prop5.3.4",
            "zeta_fibdil",
            fk(VectorJob::new(lc_form(&z4c)), &z4c),
        )
        .control()
        .hyp("each zeta_i Killing"),
    );

    let z = Z::of("zeta");
    let j5 = fk(
        VectorJob::new(lc_form(&z)).hyp(factor_killing(&z, B, false)),
        &z,
    )
    .side(warp_sum(&z), fib(0));
    with_control(
        out,
        m,
        "Prop5.3.5",
        "zeta",
        "all parts Killing, sum_i f_i zeta_B(f_i)|X_i|^2 = 0",
        j5,
    );

    let nec1 = |z: &Z, ssm: bool| {
        VectorJob::new(factor_form(z, B, ssm))
            .support(&[B])
            .vec_hyp(if ssm { ssm_form(z) } else { lc_form(z) })
    };
    out.push(job_case(m, "Prop5.4.1", "zeta", nec1(&z, false)).hyp("zeta Killing (X in the base)"));
    out.push(
        job_case(m, "Prop5.4.1", "zeta_div", nec1(&Z::of("zeta_div"), false))
            .control()
            .hyp("zeta Killing"),
    );
    // With P = 0 the semi-symmetric statement must agree.
    out.push(
        job_case(m, "Prop4.8.1", "zeta, P = 0", nec1(&z, true))
            .hyp("zeta ssm-Killing (X in the base)"),
    );

    let nec2 = |z: &Z| {
        VectorJob::new(factor_forms(z, &fibers))
            .support(&fibers)
            .vec_hyp(lc_form(z))
            .side(warp_sum(z), fib(0))
    };
    let h = "zeta Killing (X in the fibers), sum_i f_i zeta_B(f_i)|X_i|^2 = 0";
    out.push(job_case(m, "Prop5.4.2", "zeta", nec2(&z)).hyp(h));
    out.push(
        job_case(m, "Prop5.4.2", "zeta_div", nec2(&Z::of("zeta_div")))
            .control()
            .hyp(h),
    );
}

/// The product metric of a spacetime manifest against its defining formula:
/// a `−dt²` time block, and the other blocks warped as the definition says.
fn spacetime_case(m: &Manifest) -> Case {
    let spec = m.spacetime.clone().expect("spacetime manifest");
    let (id, time_block) = match &spec.kind {
        SpacetimeKind::Grw { .. } => ("Def3.19", B),
        SpacetimeKind::StandardStatic { .. } => ("Def3.23", fib(0)),
        SpacetimeKind::Kasner { .. } => ("Def6.16", B),
    };
    let label = spacetime_label(&spec.kind);
    let eval = Arc::new(
        move |ctx: &super::PointCtx<'_>, _rng: &mut crate::sampling::SplitMix64| {
            let ps = ctx.ps();
            let base_pt: Vec<f64> = ctx.bc(B).point.coords().to_vec();
            let base_names: Vec<&str> = ps.base.coords.iter().map(String::as_str).collect();
            let parse = |src: &str| FieldExpr::parse_with(src, &base_names, &spec.constants);
            let expected: Vec<f64> = match &spec.kind {
                SpacetimeKind::Grw { f, .. } | SpacetimeKind::StandardStatic { f, .. } => {
                    let w = parse(f)?.eval(&base_pt)?;
                    vec![w; ps.m()]
                }
                SpacetimeKind::Kasner { phi, exponents, .. } => {
                    let p = parse(phi)?.eval(&base_pt)?;
                    exponents.iter().map(|e| p.powf(*e)).collect()
                }
            };
            let n = ctx.n();
            let mut r = 0.0f64;
            // Time block is exactly −dt² before warping.
            let tb = ctx.bc(time_block);
            r = r.max((tb.geom.g(0, 0) + 1.0).abs());
            for a in 0..n {
                for b in 0..n {
                    let (ba, bb) = (ps.block_of(a), ps.block_of(b));
                    let want = if ba != bb {
                        0.0
                    } else {
                        let bc = ctx.bc(ba);
                        let (la, lb) = (a - bc.range.start, b - bc.range.start);
                        let w = match ba {
                            Block::Fiber(i) => expected[i] * expected[i],
                            _ => 1.0,
                        };
                        w * bc.geom.g(la, lb)
                    };
                    r = r.max(rel(ctx.geom.g(a, b), want));
                }
            }
            Ok(vec![Sample::identity(r)])
        },
    );
    Case::new(id, m, label, TolClass::Alg, eval)
}

fn spacetime_label(k: &SpacetimeKind) -> String {
    match k {
        SpacetimeKind::Grw { f, .. } => format!("-dt^2 + ({f})^2 g_2"),
        SpacetimeKind::StandardStatic { f, .. } => format!("g_1 - ({f})^2 dt^2"),
        SpacetimeKind::Kasner { phi, exponents, .. } => {
            let p: Vec<String> = exponents.iter().map(|e| format!("{e:.4}")).collect();
            format!("-dt^2 + sum ({phi})^(2p_i) g_i, p = ({})", p.join(", "))
        }
    }
}
