//! Synthetic files in the exact formats of the real datasets, with planted
//! dependence, for exercising the pipelines without the originals.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::heart::{HEART_ATTRIBUTES, HEART_FILES, RECOMMENDED_13};
use super::wine::WINE_COLUMNS;
use crate::error::{Error, Result};
use crate::rng::rng;

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes the four heart files (899 records in total) into `dir`. The
/// diagnosis depends on a latent severity shared with the recommended
/// attributes except `fbs`; other attributes are noise, and about 3% of
/// values are the missing code `-9`.
pub fn write_heart_fixture(dir: &Path, seed: u64) -> Result<()> {
    let sizes = [303, 294, 123, 200 - 21];
    let mut r = rng(seed);
    let mut id = 0;
    for (file, &size) in HEART_FILES.iter().zip(&sizes) {
        let mut text = String::new();
        for _ in 0..size {
            id += 1;
            let s: f64 = StandardNormal.sample(&mut r);
            let num = ((s + 1.0) * 1.3).round().clamp(0.0, 4.0);
            for (c, &name) in HEART_ATTRIBUTES.iter().enumerate() {
                let token = match name {
                    "name" => "name".to_string(),
                    "id" => id.to_string(),
                    "num" => format!("{num}"),
                    "fbs" => u8::from(r.random::<f64>() < 0.15).to_string(),
                    _ if r.random::<f64>() < 0.03 => "-9".to_string(),
                    a if RECOMMENDED_13.contains(&a) => {
                        let e: f64 = StandardNormal.sample(&mut r);
                        format!("{:.2}", 50.0 + 10.0 * (0.8 * s + 0.6 * e))
                    }
                    _ => {
                        let e: f64 = StandardNormal.sample(&mut r);
                        format!("{:.2}", 10.0 + 3.0 * e)
                    }
                };
                text.push_str(&token);
                text.push(if c % 8 == 7 || name == "name" {
                    '\n'
                } else {
                    ' '
                });
            }
        }
        write(&dir.join(file), &text)?;
    }
    Ok(())
}

/// Writes `n` rows of a white-wine-format file whose quality depends most
/// on alcohol, then density, then residual sugar.
pub fn write_wine_fixture(path: &Path, n: usize, seed: u64) -> Result<()> {
    let mut r = rng(seed);
    let mut text = WINE_COLUMNS
        .iter()
        .map(|c| format!("\"{c}\""))
        .collect::<Vec<_>>()
        .join(";");
    text.push('\n');
    for _ in 0..n {
        let mut g = || -> f64 { StandardNormal.sample(&mut r) };
        let alcohol = 10.5 + 1.2 * g();
        let sugar = 6.0 + 4.0 * g().abs();
        let density = 0.994 - 0.001 * (alcohol - 10.5) + 0.0003 * (sugar - 6.0) + 0.0002 * g();
        let q = (6.0 + 0.6 * (alcohol - 10.5) - 400.0 * (density - 0.994) + 0.7 * g()).round();
        let values = [
            6.8 + 0.8 * g(),
            0.28 + 0.1 * g().abs(),
            0.33 + 0.1 * g(),
            sugar,
            0.045 + 0.02 * g().abs(),
            35.0 + 15.0 * g().abs(),
            138.0 + 40.0 * g().abs(),
            density,
            3.19 + 0.15 * g(),
            0.49 + 0.1 * g().abs(),
            alcohol,
            q.clamp(3.0, 9.0),
        ];
        let row: Vec<String> = values.iter().map(|v| format!("{v:.5}")).collect();
        writeln!(text, "{}", row.join(";")).expect("writing to a String");
    }
    write(path, &text)
}

/// Writes hourly rows for 2010-01-01 through 2010-06-30 in the Beijing
/// file layout. PM2.5 is an AR(1) series pushed by falling pressure; `NA`
/// values appear only outside the analysis window.
pub fn write_beijing_fixture(path: &Path, seed: u64) -> Result<()> {
    let mut r = rng(seed);
    let mut text = String::from("No,year,month,day,hour,pm2.5,DEWP,TEMP,PRES,cbwd,Iws,Is,Ir\n");
    let days = [31, 28, 31, 30, 31, 30];
    let dirs = ["NW", "cv", "NE", "SE"];
    let mut no = 0;
    let mut pm: f64 = 80.0;
    let mut pres: f64 = 1015.0;
    for (mi, &dn) in days.iter().enumerate() {
        for day in 1..=dn {
            for hour in 0..24 {
                no += 1;
                let e1: f64 = StandardNormal.sample(&mut r);
                let e2: f64 = StandardNormal.sample(&mut r);
                pres = 1015.0 + 0.95 * (pres - 1015.0) + 1.2 * e1;
                pm = (0.9 * pm + 12.0 - 1.5 * (pres - 1015.0) + 15.0 * e2).max(3.0);
                let in_window = (mi == 3 && day >= 2) || (mi == 4 && day <= 14);
                let pm_text = if !in_window && r.random::<f64>() < 0.05 {
                    "NA".to_string()
                } else {
                    format!("{:.0}", pm)
                };
                let dewp = -5.0 + 8.0 * r.random::<f64>();
                let temp = 5.0 + mi as f64 * 4.0 + 6.0 * r.random::<f64>();
                let dir = dirs[r.random_range(0..dirs.len())];
                let iws = 20.0 * r.random::<f64>();
                writeln!(
                    text,
                    "{no},2010,{},{day},{hour},{pm_text},{dewp:.0},{temp:.0},{pres:.0},{dir},{iws:.2},0,0",
                    mi + 1
                )
                .expect("writing to a String");
            }
        }
    }
    write(path, &text)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn fixtures_load_with_expected_shapes() {
        let dir = tempfile::tempdir().unwrap();
        write_heart_fixture(dir.path(), 1).unwrap();
        let heart = load_heart(dir.path()).unwrap();
        assert_eq!(heart.n_records(), 899);
        assert_eq!(heart.n_attributes(), 76);

        let wine_path = dir.path().join("winequality-white.csv");
        write_wine_fixture(&wine_path, 200, 2).unwrap();
        let wine = load_wine_white(&wine_path).unwrap();
        assert_eq!(wine.data.ncols(), 12);
        assert_eq!(wine.data.nrows(), 200);

        let air_path = dir.path().join("prsa.csv");
        write_beijing_fixture(&air_path, 3).unwrap();
        let air = load_beijing_window(&air_path).unwrap();
        assert_eq!(air.data.nrows(), WINDOW_ROWS);
        assert!(air.warning.is_none());
        let first = air.data.row(0);
        assert_eq!(
            (first[0], first[1], first[2], first[3]),
            (2010.0, 4.0, 2.0, 0.0)
        );
        assert_eq!(air.cbwd_levels, vec!["NE", "NW", "SE", "cv"]);
    }

    #[test]
    fn wine_header_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("w.csv");
        std::fs::write(&p, "a;b\n1;2\n").unwrap();
        assert!(matches!(load_wine_white(&p), Err(Error::Schema(_))));
    }

    #[test]
    fn missing_value_inside_window_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("prsa.csv");
        write_beijing_fixture(&p, 4).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let fixed: Vec<String> = text
            .lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                if f[1..5] == ["2010", "4", "3", "5"] {
                    f[5] = "NA";
                }
                f.join(",")
            })
            .collect();
        std::fs::write(&p, fixed.join("\n")).unwrap();
        assert!(matches!(
            load_beijing_window(&p),
            Err(Error::WindowMismatch(_))
        ));
    }
}
