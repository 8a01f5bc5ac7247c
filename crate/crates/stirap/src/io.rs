//! CSV output. All numbers print with 17 significant digits so files are
//! byte-reproducible and round-trip through f64 exactly.

use std::io::Write;

use crate::diagnostics::SpectrumSeries;
use crate::error::Result;
use crate::propagator::Trajectory;
use crate::sweep::SweepPoint;

/// Full-precision float formatting (17 significant digits).
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `t,re_c1,im_c1,...,re_cN,im_cN,p1,...,pN`, one row per grid point.
pub fn write_trajectory_csv<W: Write + ?Sized>(out: &mut W, traj: &Trajectory) -> Result<()> {
    let n = traj.initial().len();
    let mut header = String::from("t");
    for i in 1..=n {
        header.push_str(&format!(",re_c{i},im_c{i}"));
    }
    for i in 1..=n {
        header.push_str(&format!(",p{i}"));
    }
    writeln!(out, "{header}")?;
    for (t, state) in traj.times().iter().zip(&traj.states) {
        let mut row = format_float(*t);
        for c in &state.amplitudes {
            row.push(',');
            row.push_str(&format_float(c.re));
            row.push(',');
            row.push_str(&format_float(c.im));
        }
        for c in &state.amplitudes {
            row.push(',');
            row.push_str(&format_float(c.norm_sqr()));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// `t,lambda1,...,lambdaN,theta_dot`, eigenvalues sorted ascending.
pub fn write_spectrum_csv<W: Write + ?Sized>(out: &mut W, series: &SpectrumSeries) -> Result<()> {
    let n = series.n_levels();
    let mut header = String::from("t");
    for i in 1..=n {
        header.push_str(&format!(",lambda{i}"));
    }
    header.push_str(",theta_dot");
    writeln!(out, "{header}")?;
    for k in 0..series.times.len() {
        let mut row = format_float(series.times[k]);
        for l in &series.eigenvalues[k] {
            row.push(',');
            row.push_str(&format_float(*l));
        }
        row.push(',');
        row.push_str(&format_float(series.theta_dot[k]));
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// `value,p1,...,pN,ratio,margin`, one row per sweep point. `n_levels`
/// fixes the header even when the sweep is empty.
pub fn write_sweep_csv<W: Write + ?Sized>(out: &mut W, points: &[SweepPoint], n_levels: usize) -> Result<()> {
    let mut header = String::from("value");
    for i in 1..=n_levels {
        header.push_str(&format!(",p{i}"));
    }
    header.push_str(",ratio,margin");
    writeln!(out, "{header}")?;
    for p in points {
        let mut row = format_float(p.value);
        for pop in &p.populations {
            row.push(',');
            row.push_str(&format_float(*pop));
        }
        row.push(',');
        row.push_str(&format_float(p.ratio));
        row.push(',');
        row.push_str(&format_float(p.margin));
        writeln!(out, "{row}")?;
    }
    Ok(())
}
