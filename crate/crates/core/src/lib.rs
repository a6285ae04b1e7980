//! The four eSTREAM software-profile portfolio stream ciphers — Salsa20/12,
//! Rabbit, HC-128 and Sosemanuk — behind one keystream/encrypt interface.
//!
//! Cipher construction takes a key and an IV and yields a [`CipherInstance`]
//! that emits keystream bytes on demand; encryption and decryption are the
//! same XOR transform. A known-answer-test verifier ([`vectors`]) and a
//! timing harness ([`bench`]) sit on top of the cipher layer.
//!
//! # Security Warning
//!
//! Plain stream-cipher XOR provides no ciphertext integrity, and reusing a
//! (key, IV) pair leaks the XOR of the plaintexts. This crate is a research
//! and measurement tool, not an authenticated-encryption library.

pub mod bench;
pub mod cipher_core;
pub mod hc128;
pub mod rabbit;
pub mod reference;
pub mod salsa20;
mod serpent;
pub mod sosemanuk;
pub mod vectors;

pub use cipher_core::{CipherError, CipherId, CipherInstance, STREAM_LENGTH_CAP};
