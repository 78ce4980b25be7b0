//! Reflection solver (frequency-space route).
