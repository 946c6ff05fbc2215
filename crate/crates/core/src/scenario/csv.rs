use std::fmt::Write;

use crate::integrator::Trajectory;
use crate::proportionality::ProportionalityTrace;

pub const CSV_HEADER: &str =
    "time,H,A,S,T,U,C,F_HA,F_AH,F_sync,delta_obs,PG,opacity,TR_eff,guard,MA,CD,score,DQ";

fn push_num(line: &mut String, v: f64) {
    // Normalize -0 so identical runs print identical bytes regardless of sign of zero.
    let v = if v == 0.0 { 0.0 } else { v };
    write!(line, ",{v:.9}").unwrap();
}

/// One row per sample, fixed 9-decimal fields, newline-terminated.
///
/// # Panics
///
/// If the three series are not aligned.
pub fn write_trajectory_csv(traj: &Trajectory, trace: &ProportionalityTrace, dq: &[f64]) -> String {
    assert_eq!(traj.len(), trace.score.len(), "trace not aligned with trajectory");
    assert_eq!(traj.len(), dq.len(), "decision quality not aligned with trajectory");
    let mut out = String::with_capacity(256 * (traj.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..traj.len() {
        let x = &traj.states[i];
        let aux = &traj.aux[i];
        let mut line = format!("{:.9}", traj.times[i]);
        for v in [
            x.h,
            x.a,
            x.s,
            x.t,
            x.u,
            x.c,
            aux.f_ha,
            aux.f_ah,
            aux.f_sync,
            aux.delta_obs,
            aux.pg,
            aux.opacity,
            aux.tr_eff,
        ] {
            push_num(&mut line, v);
        }
        line.push_str(if traj.guards[i].b3_active { ",1" } else { ",0" });
        for v in [trace.ma[i], trace.cd[i], trace.score[i], dq[i]] {
            push_num(&mut line, v);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
