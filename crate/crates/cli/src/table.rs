//! Aligned text tables and significant-digit formatting.

/// Formats `value` with `significant` significant digits (tables print five,
/// matching the precision the headline figures are quoted at).
pub fn fmt_sig(value: f64, significant: u32) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (significant as i32 - 1 - exponent).clamp(0, 17) as usize;
    format!("{value:.decimals$}")
}

/// Renders rows as an aligned table with a header line.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let columns = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(columns) {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[String]| {
        for (i, cell) in cells.iter().enumerate().take(columns) {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            // Pad every column but the last.
            if i + 1 < columns {
                for _ in cell.len()..widths[i] {
                    out.push(' ');
                }
            }
        }
        out.push('\n');
    };
    push_row(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        push_row(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_significant_digits() {
        assert_eq!(fmt_sig(2.9504534948388317, 5), "2.9505");
        assert_eq!(fmt_sig(6933.565712871255, 5), "6933.6");
        assert_eq!(fmt_sig(0.00045, 5), "0.00045000");
        assert_eq!(fmt_sig(1.1914893617021276, 5), "1.1915");
        assert_eq!(fmt_sig(0.0, 5), "0");
        assert_eq!(fmt_sig(-2.476273468882591, 5), "-2.4763");
    }

    #[test]
    fn columns_align() {
        let table = render_table(
            &["delay_days", "roi"],
            &[
                vec!["0".to_string(), "2.4763".to_string()],
                vec!["140".to_string(), "1.1959".to_string()],
            ],
        );
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "delay_days  roi");
        assert_eq!(lines[1], "0           2.4763");
        assert_eq!(lines[2], "140         1.1959");
    }
}
