//! Keep/prune masks over the token grid: `#` kept, `.` pruned.

use resprune::{Error, Grid, SelectionResult};

fn kept_cells(indices: &[usize], tokens: usize, grid: Grid) -> resprune::Result<Vec<bool>> {
    if grid.cells() != tokens {
        return Err(Error::Shape {
            what: "grid cells (H*W) vs token count",
            expected: tokens,
            found: grid.cells(),
        });
    }
    let mut kept = vec![false; tokens];
    for &i in indices {
        if i >= tokens {
            return Err(Error::Config(format!("index {i} out of range for {tokens} tokens")));
        }
        kept[i] = true;
    }
    Ok(kept)
}

/// One text line per grid row, each terminated by `\n`.
pub fn ascii_mask(indices: &[usize], tokens: usize, grid: Grid) -> resprune::Result<String> {
    let kept = kept_cells(indices, tokens, grid)?;
    let mut out = String::with_capacity(tokens + grid.height);
    for row in kept.chunks_exact(grid.width) {
        out.extend(row.iter().map(|&k| if k { '#' } else { '.' }));
        out.push('\n');
    }
    Ok(out)
}

/// Binary PGM (`P5`, maxval 255): 255 kept, 0 pruned, row-major.
pub fn pgm_mask(indices: &[usize], tokens: usize, grid: Grid) -> resprune::Result<Vec<u8>> {
    let kept = kept_cells(indices, tokens, grid)?;
    let mut out = format!("P5\n{} {}\n255\n", grid.width, grid.height).into_bytes();
    out.extend(kept.iter().map(|&k| if k { 255u8 } else { 0 }));
    Ok(out)
}

/// ASCII mask of a selection; the token count is the length of its weight
/// vector.
pub fn render_mask(result: &SelectionResult, grid: Grid) -> resprune::Result<String> {
    ascii_mask(&result.indices, result.weights.len(), grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_kept() {
        let s = ascii_mask(&[0, 1, 2, 3], 4, Grid::new(2, 2)).unwrap();
        assert_eq!(s, "##\n##\n");
    }

    #[test]
    fn single_corner() {
        assert_eq!(ascii_mask(&[3], 4, Grid::new(2, 2)).unwrap(), "..\n.#\n");
    }

    #[test]
    fn pgm_bytes() {
        let p = pgm_mask(&[0, 5], 6, Grid::new(2, 3)).unwrap();
        assert_eq!(&p[..11], b"P5\n3 2\n255\n");
        assert_eq!(&p[11..], &[255, 0, 0, 0, 0, 255]);
    }

    #[test]
    fn grid_mismatch() {
        assert!(ascii_mask(&[0], 5, Grid::new(2, 2)).is_err());
        assert!(pgm_mask(&[9], 4, Grid::new(2, 2)).is_err());
    }
}
