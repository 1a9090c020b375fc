//! XOR combination of keystream and data.
//!
//! Encryption and decryption are the same operation. Ciphertexts depend on
//! binary64 `cos`/`acos` results, so they only decrypt on a build whose
//! floating-point results are bit-identical to the encryptor's; the keystream
//! fingerprint test detects drift. There is no nonce, framing or MAC.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::chaos_maps::MapBank;
use crate::keying::KeyMaterial;
use crate::keystream::{Generator, GeneratorError};

const STREAM_CHUNK: usize = 64 * 1024;

#[derive(Debug, Error)]
pub enum CipherError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

/// A keystream position plus the number of bytes already combined.
#[derive(Debug, Clone)]
pub struct CipherSession {
    generator: Generator,
    bytes_processed: u64,
}

impl CipherSession {
    pub fn new(key: &KeyMaterial, bank: &MapBank) -> Result<Self, GeneratorError> {
        Ok(Self::from_generator(Generator::new(key, bank)?))
    }

    pub fn from_generator(generator: Generator) -> Self {
        Self {
            generator,
            bytes_processed: 0,
        }
    }

    pub fn bytes_processed(&self) -> u64 {
        self.bytes_processed
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn apply(&mut self, data: &[u8]) -> Result<Vec<u8>, GeneratorError> {
        let mut out = data.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn apply_in_place(&mut self, data: &mut [u8]) -> Result<(), GeneratorError> {
        self.generator.xor_into(data)?;
        self.bytes_processed += data.len() as u64;
        Ok(())
    }

    /// Streams `reader` through the cipher into `writer`, returning the byte
    /// count.
    pub fn apply_stream<R: Read, W: Write>(
        &mut self,
        mut reader: R,
        mut writer: W,
    ) -> Result<u64, CipherError> {
        let mut buf = vec![0u8; STREAM_CHUNK];
        let mut total = 0u64;
        loop {
            let n = match reader.read(&mut buf) {
                Ok(0) => break,
                Ok(n) => n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e.into()),
            };
            self.apply_in_place(&mut buf[..n])?;
            writer.write_all(&buf[..n])?;
            total += n as u64;
        }
        writer.flush()?;
        Ok(total)
    }
}

/// One-shot helper: fresh session, whole message.
pub fn apply_keystream(
    key: &KeyMaterial,
    bank: &MapBank,
    data: &[u8],
) -> Result<Vec<u8>, GeneratorError> {
    CipherSession::new(key, bank)?.apply(data)
}
