//! TDSE oracle.
