//! Input parsing, preprocessing, and the separator-delimited concatenation.

use std::io::{Read, Write};

use log::warn;

use crate::error::{Error, Result};
use crate::index::{sais, BwtIndex};

/// Code of the separator `$`; smaller than every symbol code.
pub const SEPARATOR: u8 = 0;
/// Input byte that may not appear in strings (it is the separator in dumps).
pub const RESERVED_BYTE: u8 = 0x00;
pub const DUMP_MAGIC: &[u8; 4] = b"SCS1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    Fasta,
    #[default]
    Lines,
}

impl InputFormat {
    /// FASTA if the first non-blank byte is `>`, else lines.
    pub fn detect(bytes: &[u8]) -> Self {
        match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
            Some(b'>') => InputFormat::Fasta,
            _ => InputFormat::Lines,
        }
    }
}

/// Parsed input strings in file order; the index in `strings` is the
/// original input id (0-based here, reported 1-based).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedInput {
    pub strings: Vec<Vec<u8>>,
    pub skipped_empty: usize,
}

pub fn parse_input(bytes: &[u8], format: InputFormat) -> Result<ParsedInput> {
    let mut parsed = ParsedInput::default();
    let lines = bytes.split(|&b| b == b'\n').enumerate().map(|(i, l)| {
        let l = l.strip_suffix(b"\r").unwrap_or(l);
        (i + 1, l)
    });
    // A trailing newline yields one empty final piece; it is not a record.
    let n_pieces = bytes.split(|&b| b == b'\n').count();
    let trailing_newline = bytes.last() == Some(&b'\n');

    match format {
        InputFormat::Lines => {
            for (lineno, line) in lines {
                if line.is_empty() {
                    if !(trailing_newline && lineno == n_pieces) && !bytes.is_empty() {
                        warn!("line {lineno}: skipping empty string");
                        parsed.skipped_empty += 1;
                    }
                    continue;
                }
                check_symbols(line, lineno)?;
                parsed.strings.push(line.to_vec());
            }
        }
        InputFormat::Fasta => {
            let mut current: Option<(usize, Vec<u8>)> = None;
            let finish = |rec: Option<(usize, Vec<u8>)>, parsed: &mut ParsedInput| {
                if let Some((header_line, seq)) = rec {
                    if seq.is_empty() {
                        warn!("line {header_line}: skipping empty FASTA record");
                        parsed.skipped_empty += 1;
                    } else {
                        parsed.strings.push(seq);
                    }
                }
            };
            for (lineno, line) in lines {
                if line.first() == Some(&b'>') {
                    finish(current.take(), &mut parsed);
                    current = Some((lineno, Vec::new()));
                    continue;
                }
                let seq = line.trim_ascii();
                if seq.is_empty() || seq.first() == Some(&b';') {
                    continue;
                }
                match current.as_mut() {
                    Some((_, buf)) => {
                        check_symbols(seq, lineno)?;
                        buf.extend_from_slice(seq);
                    }
                    None => return Err(Error::parse(lineno, "sequence before first FASTA header")),
                }
            }
            finish(current.take(), &mut parsed);
        }
    }
    Ok(parsed)
}

fn check_symbols(s: &[u8], lineno: usize) -> Result<()> {
    if s.contains(&RESERVED_BYTE) {
        warn!("line {lineno}: reserved separator byte in input");
        return Err(Error::ReservedSymbol(RESERVED_BYTE));
    }
    Ok(())
}

/// Order-preserving map from input bytes to codes `1..=sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbol_to_code: [u8; 256],
    code_to_symbol: Vec<u8>,
}

impl Alphabet {
    pub fn from_strings<S: AsRef<[u8]>>(strings: &[S]) -> Result<Self> {
        let mut seen = [false; 256];
        for s in strings {
            for &b in s.as_ref() {
                seen[b as usize] = true;
            }
        }
        if seen[RESERVED_BYTE as usize] {
            return Err(Error::ReservedSymbol(RESERVED_BYTE));
        }
        let mut symbol_to_code = [0u8; 256];
        // Code 0 displays as '$'.
        let mut code_to_symbol = vec![b'$'];
        for b in 0..256usize {
            if seen[b] {
                symbol_to_code[b] = code_to_symbol.len() as u8;
                code_to_symbol.push(b as u8);
            }
        }
        Ok(Alphabet {
            symbol_to_code,
            code_to_symbol,
        })
    }

    /// Number of distinct non-separator symbols.
    pub fn sigma(&self) -> usize {
        self.code_to_symbol.len() - 1
    }

    pub fn code(&self, symbol: u8) -> Option<u8> {
        match self.symbol_to_code[symbol as usize] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn symbol(&self, code: u8) -> u8 {
        self.code_to_symbol[code as usize]
    }

    pub fn encode(&self, s: &[u8]) -> Vec<u8> {
        s.iter()
            .map(|&b| self.code(b).expect("symbol outside alphabet"))
            .collect()
    }

    pub fn decode(&self, codes: &[u8]) -> Vec<u8> {
        codes.iter().map(|&c| self.symbol(c)).collect()
    }
}

/// Where an original input string ended up after preprocessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Kept(usize),
    /// Exact copy of an earlier input; the id is that copy's kept id (or its witness).
    Duplicate(usize),
    /// Proper substring of the kept string with this id.
    Contained(usize),
    Empty,
}

impl Origin {
    /// Kept string that contains this input, if any.
    pub fn kept_id(&self) -> Option<usize> {
        match *self {
            Origin::Kept(id) | Origin::Duplicate(id) | Origin::Contained(id) => Some(id),
            Origin::Empty => None,
        }
    }
}

/// Distinct, containment-free, lexicographically sorted code strings.
/// Kept ids are 1-based ranks in that order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StringSet {
    strings: Vec<Vec<u8>>,
    origins: Vec<Origin>,
    /// Original input id of each kept string (0-based), indexed by id - 1.
    representatives: Vec<usize>,
    sigma: usize,
    n_chars: usize,
}

impl StringSet {
    pub fn m(&self) -> usize {
        self.representatives.len()
    }

    pub fn n_chars(&self) -> usize {
        self.n_chars
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn strings(&self) -> &[Vec<u8>] {
        &self.strings
    }

    /// Kept string with 1-based `id`.
    pub fn get(&self, id: usize) -> &[u8] {
        &self.strings[id - 1]
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    /// Original (0-based) input id of kept string `id`.
    pub fn representative(&self, id: usize) -> usize {
        self.representatives[id - 1]
    }

    /// Drops the string bodies, keeping ids and origins.
    pub fn into_skeleton(mut self) -> Self {
        self.strings = Vec::new();
        self
    }
}

/// Removes duplicates and strings contained in others; see [`StringSet`].
pub fn dedup_and_filter(strings: &[Vec<u8>], sigma: usize) -> StringSet {
    preprocess(strings, sigma).0
}

/// Like [`dedup_and_filter`], also returning the pass-one suffix array when
/// nothing was removed for containment (it then indexes the final set).
pub(crate) fn preprocess(strings: &[Vec<u8>], sigma: usize) -> (StringSet, Option<Vec<u32>>) {
    let mut order: Vec<usize> = (0..strings.len())
        .filter(|&i| !strings[i].is_empty())
        .collect();
    order.sort_by(|&a, &b| strings[a].cmp(&strings[b]).then(a.cmp(&b)));

    // Distinct strings in sorted order, and each input's distinct rank.
    let mut distinct: Vec<usize> = Vec::new();
    let mut rank_of = vec![usize::MAX; strings.len()];
    for &i in &order {
        match distinct.last() {
            Some(&d) if strings[d] == strings[i] => {}
            _ => distinct.push(i),
        }
        rank_of[i] = distinct.len() - 1;
    }

    let concat = Concatenation::from_strings(distinct.iter().map(|&i| &strings[i][..]), sigma);
    let sa = sais::suffix_array(concat.codes(), sigma + 1);
    let bwt = BwtIndex::from_suffix_array(concat.codes(), &sa, sigma);

    let starts = concat.start_offsets();
    let mut witness: Vec<Option<usize>> = vec![None; distinct.len()];
    for (p, &i) in distinct.iter().enumerate() {
        let range = bwt.backward_search(&strings[i]);
        if range.len() > 1 {
            let other = (range.lo..=range.hi)
                .map(|k| sa[k - 1] as usize)
                .find(|&pos| pos != starts[p])
                .expect("second occurrence");
            let owner = starts.partition_point(|&s| s <= other) - 1;
            debug_assert_ne!(owner, p);
            witness[p] = Some(owner);
        }
    }
    drop(bwt);

    let mut final_id = vec![0usize; distinct.len()];
    let mut kept = Vec::new();
    let mut representatives = Vec::new();
    for (p, &i) in distinct.iter().enumerate() {
        if witness[p].is_none() {
            kept.push(strings[i].clone());
            representatives.push(i);
            final_id[p] = kept.len();
        }
    }
    let resolve = |mut p: usize| {
        while let Some(q) = witness[p] {
            p = q;
        }
        final_id[p]
    };

    let origins = (0..strings.len())
        .map(|i| {
            if strings[i].is_empty() {
                return Origin::Empty;
            }
            let p = rank_of[i];
            let target = resolve(p);
            if distinct[p] != i {
                Origin::Duplicate(target)
            } else if witness[p].is_some() {
                Origin::Contained(target)
            } else {
                Origin::Kept(target)
            }
        })
        .collect();

    let n_chars = kept.iter().map(Vec::len).sum();
    let removed_any = kept.len() != distinct.len();
    let set = StringSet {
        strings: kept,
        origins,
        representatives,
        sigma,
        n_chars,
    };
    (set, (!removed_any).then_some(sa))
}

/// `$s_1$s_2$…$s_m$` as codes, with `$` = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concatenation {
    codes: Vec<u8>,
    start_offsets: Vec<usize>,
    sigma: usize,
}

impl Concatenation {
    pub fn from_set(set: &StringSet) -> Self {
        Self::from_strings(set.strings().iter().map(|s| &s[..]), set.sigma())
    }

    pub fn from_strings<'a, I: IntoIterator<Item = &'a [u8]>>(strings: I, sigma: usize) -> Self {
        let mut codes = vec![SEPARATOR];
        let mut start_offsets = Vec::new();
        for s in strings {
            start_offsets.push(codes.len());
            codes.extend_from_slice(s);
            codes.push(SEPARATOR);
        }
        Concatenation {
            codes,
            start_offsets,
            sigma,
        }
    }

    /// Wraps raw codes; string boundaries are the separators.
    pub fn from_codes(codes: Vec<u8>, sigma: usize) -> Self {
        assert_eq!(codes.first(), Some(&SEPARATOR), "text must begin with a separator");
        assert_eq!(codes.last(), Some(&SEPARATOR), "text must end with a separator");
        let start_offsets = codes
            .iter()
            .enumerate()
            .filter(|&(i, &c)| c == SEPARATOR && i + 1 < codes.len())
            .map(|(i, _)| i + 1)
            .collect();
        Concatenation {
            codes,
            start_offsets,
            sigma,
        }
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn m(&self) -> usize {
        self.start_offsets.len()
    }

    pub fn n_chars(&self) -> usize {
        self.codes.len() - self.m() - 1
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn start_offsets(&self) -> &[usize] {
        &self.start_offsets
    }

    /// Bits per packed code in the dump format, `ceil(log2(sigma + 1))`.
    pub fn dump_code_width(sigma: usize) -> u32 {
        usize::BITS - sigma.leading_zeros()
    }

    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(DUMP_MAGIC)?;
        for v in [self.sigma, self.m(), self.n_chars()] {
            out.write_all(&(v as u64).to_le_bytes())?;
        }
        let width = Self::dump_code_width(self.sigma) as usize;
        let mut packed = vec![0u8; (self.codes.len() * width).div_ceil(8)];
        for (i, &c) in self.codes.iter().enumerate() {
            for b in 0..width {
                if (c >> b) & 1 == 1 {
                    let bit = i * width + b;
                    packed[bit / 8] |= 1 << (bit % 8);
                }
            }
        }
        out.write_all(&packed)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_dump<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        input
            .read_exact(&mut magic)
            .map_err(|_| Error::format("dump too short"))?;
        if &magic != DUMP_MAGIC {
            if &magic[..3] == b"SCS" {
                return Err(Error::UnsupportedVersion {
                    expected: '1',
                    found: magic[3] as char,
                });
            }
            return Err(Error::format("not a string-set dump (bad magic)"));
        }
        let mut fields = [0usize; 3];
        for f in &mut fields {
            let mut b = [0u8; 8];
            input
                .read_exact(&mut b)
                .map_err(|_| Error::format("truncated dump header"))?;
            *f = u64::from_le_bytes(b) as usize;
        }
        let [sigma, m, n_chars] = fields;
        if sigma > 255 {
            return Err(Error::format("alphabet larger than 255 symbols"));
        }
        let len = n_chars + m + 1;
        let width = Self::dump_code_width(sigma) as usize;
        let mut packed = vec![0u8; (len * width).div_ceil(8)];
        input
            .read_exact(&mut packed)
            .map_err(|_| Error::format("truncated dump payload"))?;
        let codes: Vec<u8> = (0..len)
            .map(|i| {
                (0..width).fold(0u8, |acc, b| {
                    let bit = i * width + b;
                    acc | (((packed[bit / 8] >> (bit % 8)) & 1) << b)
                })
            })
            .collect();
        if codes.iter().any(|&c| c as usize > sigma) {
            return Err(Error::format("code exceeds alphabet"));
        }
        let zeros = codes.iter().filter(|&&c| c == SEPARATOR).count();
        if zeros != m + 1 || codes[0] != SEPARATOR || codes[len - 1] != SEPARATOR {
            return Err(Error::format("separator layout disagrees with header"));
        }
        if codes.windows(2).any(|w| w == [SEPARATOR, SEPARATOR]) && m > 0 {
            return Err(Error::format("empty string in dump"));
        }
        Ok(Concatenation::from_codes(codes, sigma))
    }
}
