//! Next-occurrence tables shared by the deposition heuristics.

const ABSENT: u8 = u8::MAX;

/// Dense indices for a working symbol set, in priority order.
#[derive(Debug, Clone)]
pub(crate) struct SymbolIndex {
    symbols: Vec<u8>,
    map: [u8; 256],
}

impl SymbolIndex {
    pub fn new(symbols: &[u8]) -> Self {
        let mut map = [ABSENT; 256];
        let mut uniq = Vec::with_capacity(symbols.len());
        for &c in symbols {
            if map[c as usize] == ABSENT {
                map[c as usize] = uniq.len() as u8;
                uniq.push(c);
            }
        }
        SymbolIndex { symbols: uniq, map }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, i: usize) -> u8 {
        self.symbols[i]
    }

    pub fn index(&self, c: u8) -> Option<usize> {
        match self.map[c as usize] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }
}

/// For one string, `next(pos, c)` is the first index `>= pos` holding symbol
/// `c`, or the string length when there is none.
#[derive(Debug, Clone)]
pub(crate) struct NextTable {
    sigma: usize,
    len: usize,
    next: Vec<u32>,
}

impl NextTable {
    pub fn new(s: &[u8], index: &SymbolIndex) -> Self {
        let sigma = index.len();
        let len = s.len();
        let mut next = vec![len as u32; (len + 1) * sigma];
        for pos in (0..len).rev() {
            let (head, tail) = next.split_at_mut((pos + 1) * sigma);
            head[pos * sigma..].copy_from_slice(&tail[..sigma]);
            if let Some(ci) = index.index(s[pos]) {
                head[pos * sigma + ci] = pos as u32;
            }
        }
        NextTable { sigma, len, next }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn next(&self, pos: usize, ci: usize) -> usize {
        if pos >= self.len {
            return self.len;
        }
        self.next[pos * self.sigma + ci] as usize
    }
}
