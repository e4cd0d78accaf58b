use std::collections::BTreeSet;

use casimir_film::asymptotics::{
    delta_f_plasma, delta_p_plasma, drude_decompose, entropy_bracket, entropy_drude_zero, entropy_plasma_asymptotic,
    f_gamma, i1_quadrature, x_bound,
};
use casimir_film::dielectric::{dimensionless_params, ModelKind};
use casimir_film::lifshitz::zero_t_energy;
use casimir_film::materials;
use casimir_film::specialfn::zeta3;
use casimir_film::thermo::{entropy, pressure, thermal_correction, validate_window};
use casimir_film::{DielectricModel, FilmState, Material, QuadratureConfig};

use crate::config::{Output, RunConfig};
use crate::error::CliError;
use crate::table::{Cell, Table};

const BASE: [&str; 7] = [
    "a_m",
    "T_K",
    "model",
    "omega_p_tilde",
    "tau",
    "validity_flag",
    "window_ratio",
];

fn columns_for(o: Output) -> &'static [&'static str] {
    match o {
        Output::FreeEnergy => &["F_J_per_m2", "F_err", "E_J_per_m2", "dF_thermal", "dF_err", "route"],
        Output::Pressure => &["P_Pa", "P_err", "P_thermal_Pa"],
        Output::Entropy => &["S_J_per_m2K", "S_err"],
        Output::Asymptotics => &[
            "dF_asymptotic",
            "dF_ratio",
            "P_thermal_asymptotic",
            "P_thermal_ratio",
            "S_asymptotic",
            "S_ratio",
            "S_zero_closed",
            "S_zero_exact",
        ],
        Output::Decomposition => &["F_plasma", "F0_drude", "F0_plasma", "F_gamma", "decomposition_total"],
        Output::BoundCheck => &[
            "F_gamma_exact",
            "F_gamma_first_order",
            "X_bound",
            "C1",
            "C2",
            "bound_ok",
        ],
    }
}

/// Adds the outputs the asymptotic ratios are computed from.
fn closure(outputs: &BTreeSet<Output>) -> BTreeSet<Output> {
    let mut out = outputs.clone();
    if out.contains(&Output::Asymptotics) {
        out.extend([Output::FreeEnergy, Output::Pressure, Output::Entropy]);
    }
    out
}

pub fn resolve_material(name: &str) -> Result<Material, CliError> {
    materials::resolve(name).map_err(|e| match e {
        casimir_film::Error::MaterialNotFound(_)
        | casimir_film::Error::InvalidMaterial { .. }
        | casimir_film::Error::MaterialParse { .. }
        | casimir_film::Error::Io(_) => CliError::material(e),
        other => CliError::config(other.to_string()),
    })
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0).then(|| num / den)
}

/// One long-format row per (a, T, model), in grid order.
pub fn run(cfg: &RunConfig, command: &str) -> Result<Table, CliError> {
    cfg.validate()?;
    let material = resolve_material(&cfg.material)?;
    let outputs = closure(&cfg.outputs);
    let mut columns: Vec<String> = BASE.iter().map(|s| s.to_string()).collect();
    for o in &outputs {
        columns.extend(columns_for(*o).iter().map(|s| s.to_string()));
    }
    let mut table = Table::new(command, columns);
    let tcfg = cfg.thermo();
    for &a in &cfg.a.0 {
        for &t in &cfg.t.0 {
            for kind in cfg.models() {
                let label = format!("a = {a:e} m, T = {t} K, model = {kind}");
                let wrap = |source| CliError::numerical(label.clone(), source);
                let model = DielectricModel::new(kind, material.clone()).map_err(&wrap)?;
                let s = FilmState::new(a, t).map_err(&wrap)?;
                let row = row(&model, &s, &outputs, &tcfg).map_err(&wrap)?;
                table.push(row);
            }
        }
    }
    Ok(table)
}

fn row(
    model: &DielectricModel,
    s: &FilmState,
    outputs: &BTreeSet<Output>,
    cfg: &casimir_film::ThermoConfig,
) -> casimir_film::Result<Vec<Cell>> {
    let mat = &model.material;
    let kind = model.kind;
    let p = dimensionless_params(mat, s)?;
    let window = validate_window(s);
    let mut cells: Vec<Cell> = vec![
        s.a.into(),
        s.t.into(),
        kind.to_string().into(),
        p.omega_p_tilde.into(),
        p.tau.into(),
        (if window.inside { "inside" } else { "outside" }).into(),
        window.ratio.into(),
    ];
    let warm = s.t > 0.0;
    let mut df = None;
    let mut p_thermal = None;
    let mut s_val = None;
    for o in outputs {
        match o {
            Output::FreeEnergy => {
                let e = zero_t_energy(model, s, &cfg.quad)?;
                let (d, d_err, route) = if warm {
                    let r = thermal_correction(model, s, cfg)?;
                    (r.value.value, r.value.abs_err, r.route.to_string())
                } else {
                    (0.0, 0.0, "none".into())
                };
                df = Some(d);
                cells.extend([
                    (e.value + d).into(),
                    (e.abs_err + d_err).into(),
                    e.value.into(),
                    d.into(),
                    d_err.into(),
                    route.into(),
                ]);
            }
            Output::Pressure => {
                let pr = pressure(model, s, cfg)?;
                p_thermal = Some(pr.thermal.value);
                cells.extend([pr.total.into(), pr.abs_err.into(), pr.thermal.value.into()]);
            }
            Output::Entropy => {
                let (v, err) = if warm {
                    let d = entropy(model, s, cfg)?;
                    (d.value, d.abs_err)
                } else if kind == ModelKind::Drude {
                    (entropy_drude_zero(s, mat, &cfg.quad)?.s0, 0.0)
                } else {
                    (0.0, 0.0)
                };
                s_val = Some(v);
                cells.extend([v.into(), err.into()]);
            }
            Output::Asymptotics => {
                let plasma = kind == ModelKind::Plasma;
                let fa = plasma.then(|| delta_f_plasma(s, mat));
                let pa = plasma.then(|| delta_p_plasma(s, mat));
                let sa = plasma.then(|| entropy_plasma_asymptotic(s, mat));
                let zero = if plasma || p.omega_p_tilde == 0.0 {
                    None
                } else {
                    let z = entropy_drude_zero(&FilmState::new(s.a, 0.0)?, mat, &cfg.quad)?;
                    Some((z.s0, z.s0_exact))
                };
                cells.extend([
                    fa.into(),
                    fa.zip(df).and_then(|(a, d)| ratio(d, a)).into(),
                    pa.into(),
                    pa.zip(p_thermal).and_then(|(a, d)| ratio(d, a)).into(),
                    sa.into(),
                    sa.zip(s_val).and_then(|(a, d)| ratio(d, a)).into(),
                    zero.map(|z| z.0).into(),
                    zero.map(|z| z.1).into(),
                ]);
            }
            Output::Decomposition => {
                if warm {
                    let d = drude_decompose(s, mat, &cfg.quad)?;
                    cells.extend([
                        d.f_plasma.into(),
                        d.f0_drude.into(),
                        d.f0_plasma.into(),
                        d.f_gamma.into(),
                        d.total.into(),
                    ]);
                } else {
                    cells.extend(std::iter::repeat_n(Cell::Empty, 5));
                }
            }
            Output::BoundCheck => {
                if warm {
                    let fg = f_gamma(s, mat, &cfg.quad)?;
                    let x = x_bound(s, mat)?;
                    let ok = fg.exact.value < 0.0 && fg.exact.value.abs() < x.value;
                    cells.extend([
                        fg.exact.value.into(),
                        fg.first_order.value.into(),
                        x.value.into(),
                        x.c1.into(),
                        x.c2.into(),
                        ok.into(),
                    ]);
                } else {
                    cells.extend(std::iter::repeat_n(Cell::Empty, 6));
                }
            }
        }
    }
    Ok(cells)
}

/// I₁, I₂ and C at ω̃_p = 1, 5, 15, closed forms next to quadrature.
pub fn table_iii(quad: &QuadratureConfig) -> Result<Table, CliError> {
    let columns = ["omega_p_tilde", "I1", "I1_quadrature", "I2", "I2_exact", "C", "C_exact"];
    let mut t = Table::new("table-III", columns.iter().map(|s| s.to_string()).collect());
    for w in [1.0, 5.0, 15.0] {
        let num = |e| CliError::numerical(format!("omega_p_tilde = {w}"), e);
        let (i1, i2, i2x, base) = entropy_bracket(w, quad).map_err(num)?;
        let i1q = i1_quadrature(w, quad).map_err(num)?.value;
        debug_assert!((base - zeta3::<f64>() - i1).abs() < 1e-15);
        t.push(vec![
            w.into(),
            i1.into(),
            i1q.into(),
            i2.into(),
            i2x.into(),
            (base + i2).into(),
            (base + i2x).into(),
        ]);
    }
    Ok(t)
}

pub fn materials_table() -> Result<Table, CliError> {
    let columns = [
        "name",
        "source",
        "omega_p_rad_s",
        "gamma_ref_rad_s",
        "T_ref_K",
        "T_debye_K",
        "beta_low",
        "T_x_K",
        "comment",
    ];
    let mut t = Table::new("materials list", columns.iter().map(|s| s.to_string()).collect());
    for (m, src) in materials::list().map_err(CliError::material)? {
        t.push(vec![
            m.name.clone().into(),
            src.to_string().into(),
            m.omega_p.into(),
            m.gamma_ref.into(),
            m.t_ref.into(),
            m.t_debye.into(),
            m.beta_low.into(),
            m.t_x().into(),
            m.comment.clone().unwrap_or_default().into(),
        ]);
    }
    Ok(t)
}
