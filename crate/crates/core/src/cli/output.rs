use std::io::Write;

use super::CliError;

/// Time-series columns in their fixed output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    T,
    Eta,
    EtaDot,
    ReC,
    ImC,
    Alpha,
    Phase,
    Invariant,
    VarX,
    VarP,
    Corr,
    UProduct,
    Energy,
    ReZ,
    ImZ,
}

impl Column {
    pub const ALL: [Column; 15] = [
        Column::T,
        Column::Eta,
        Column::EtaDot,
        Column::ReC,
        Column::ImC,
        Column::Alpha,
        Column::Phase,
        Column::Invariant,
        Column::VarX,
        Column::VarP,
        Column::Corr,
        Column::UProduct,
        Column::Energy,
        Column::ReZ,
        Column::ImZ,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::T => "t",
            Column::Eta => "eta",
            Column::EtaDot => "eta_dot",
            Column::ReC => "re_c",
            Column::ImC => "im_c",
            Column::Alpha => "alpha",
            Column::Phase => "phase",
            Column::Invariant => "I",
            Column::VarX => "var_x",
            Column::VarP => "var_p",
            Column::Corr => "corr",
            Column::UProduct => "u_product",
            Column::Energy => "energy",
            Column::ReZ => "re_z",
            Column::ImZ => "im_z",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Column::ALL.iter().copied().find(|c| c.name() == name)
    }

    pub(crate) fn index(&self) -> usize {
        Column::ALL.iter().position(|c| c == self).unwrap()
    }
}

/// Scientific notation with 17 significant digits, which round-trips every
/// `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub(crate) fn io_err(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes a header row plus one row per record.
pub(crate) fn write_table<W: Write>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn names_round_trip() {
        for c in Column::ALL {
            assert_eq!(Column::from_name(c.name()), Some(c));
        }
        assert_eq!(Column::from_name("nope"), None);
    }
}
