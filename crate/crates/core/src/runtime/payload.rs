use std::fmt;

/// A message body: a sequence of bits, packed most-significant-bit first.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Payload {
    len: usize,
    bytes: Vec<u8>,
}

impl Payload {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            len: 0,
            bytes: Vec::with_capacity(bits.div_ceil(8)),
        }
    }

    /// `bits` bits taken most significant first from `bytes`; trailing bits of
    /// the last byte are cleared.
    pub fn from_bytes(mut bytes: Vec<u8>, bits: usize) -> Option<Self> {
        if bytes.len() != bits.div_ceil(8) {
            return None;
        }
        if !bits.is_multiple_of(8) {
            let keep = 0xffu8 << (8 - bits % 8);
            *bytes.last_mut().unwrap() &= keep;
        }
        Some(Self { len: bits, bytes })
    }

    pub fn bit(value: bool) -> Self {
        let mut p = Self::new();
        p.push_bit(value);
        p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push_bit(&mut self, value: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if value {
            let last = self.bytes.last_mut().unwrap();
            *last |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        assert!(width <= 64);
        assert!(
            width == 64 || value >> width == 0,
            "{value} does not fit in {width} bits"
        );
        for k in (0..width).rev() {
            self.push_bit((value >> k) & 1 == 1);
        }
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn reader(&self) -> PayloadReader<'_> {
        PayloadReader {
            payload: self,
            pos: 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Lowercase hex of the packed bytes; the last byte is zero padded.
    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Payload({} bits: {})", self.len, self.to_hex())
    }
}

pub struct PayloadReader<'a> {
    payload: &'a Payload,
    pos: usize,
}

impl PayloadReader<'_> {
    pub fn remaining(&self) -> usize {
        self.payload.len - self.pos
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        if self.pos >= self.payload.len {
            return None;
        }
        let b = self.payload.get(self.pos);
        self.pos += 1;
        Some(b)
    }

    pub fn read_uint(&mut self, width: u32) -> Option<u64> {
        if self.remaining() < width as usize {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Some(v)
    }
}
