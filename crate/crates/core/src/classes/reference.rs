//! Labels that cannot be recomputed from first principles: the Frame and
//! Manin numbering of the `W(E6)` classes, Manin's blow-down column, and
//! Urabe's numbering of the `W(E7)` classes reached by blowing up a point.

/// `(manin, frame, order, measure_inverse, eigenvalues, blow_down)`; the key
/// `(order, measure_inverse, eigenvalues)` is injective across the 25 classes.
pub const E6_LABELS: [(u32, &str, usize, u64, &str, &str); 25] = [
    (1, "C13", 12, 12, "1,3^2,12^4", ""),
    (2, "C12", 6, 72, "1,3^2,6^4", ""),
    (3, "C11", 3, 648, "1,3^6", ""),
    (4, "C14", 9, 9, "1,9^6", ""),
    (5, "C10", 6, 36, "1,2^2,3^2,6^2", ""),
    (6, "C24", 12, 12, "1^2,2,4^2,6^2", "I"),
    (7, "C20", 8, 8, "1^2,2,8^4", "XVIII"),
    (8, "C7", 6, 36, "1^3,2^2,6^2", "II"),
    (9, "C19", 4, 96, "1^2,2^3,4^2", "X"),
    (10, "C4", 4, 96, "1^3,4^4", "V"),
    (11, "C3", 2, 1152, "1^3,2^4", "IV"),
    (12, "C25", 10, 10, "1^2,2,5^4", "5"),
    (13, "C22", 6, 36, "1^2,2,3^4", "3"),
    (14, "C8", 6, 24, "1^3,2^2,3^2", "2,3"),
    (15, "C23", 6, 12, "1^2,2,3^2,6^2", "6"),
    (16, "C15", 5, 10, "1^3,5^4", "1,5"),
    (17, "C5", 4, 16, "1^3,2^2,4^2", "2,4"),
    (18, "C9", 3, 108, "1^3,3^4", "3,3"),
    (19, "C18", 4, 32, "1^4,2,4^2", "1^2,4"),
    (20, "C21", 6, 36, "1^4,2,3^2", "1,2,3"),
    (21, "C17", 2, 96, "1^4,2^3", "2^3"),
    (22, "C6", 3, 216, "1^5,3^2", "1^3,3"),
    (23, "C2", 2, 192, "1^5,2^2", "1^2,2^2"),
    (24, "C16", 2, 1440, "1^6,2", "1^4,2"),
    (25, "C1", 1, 51840, "1^7", "1^6"),
];

/// Urabe's number of a `W(E7)` class, keyed by its eigenvalues on
/// `Pic = Z^8` and the number of the 56 lines it fixes. Covers the classes
/// obtained by blowing up a rational point (not on a line) of a cubic surface.
pub const E7_URABE: [(&str, usize, u32); 25] = [
    ("1^2,3^2,12^4", 2, 22),
    ("1^2,3^2,6^4", 2, 24),
    ("1^2,3^6", 2, 20),
    ("1^2,9^6", 2, 23),
    ("1^2,2^2,3^2,6^2", 2, 21),
    ("1^3,2,4^2,6^2", 4, 33),
    ("1^3,2,8^4", 4, 32),
    ("1^4,2^2,6^2", 8, 26),
    ("1^3,2^3,4^2", 4, 29),
    ("1^4,4^4", 8, 27),
    ("1^4,2^4", 8, 25),
    ("1^3,2,5^4", 2, 58),
    ("1^3,2,3^4", 2, 42),
    ("1^4,2^2,3^2", 4, 53),
    ("1^3,2,3^2,6^2", 2, 59),
    ("1^4,5^4", 6, 56),
    ("1^4,2^2,4^2", 4, 55),
    ("1^4,3^4", 2, 54),
    ("1^5,2,4^2", 12, 52),
    ("1^5,2,3^2", 8, 51),
    ("1^5,2^3", 8, 50),
    ("1^6,3^2", 20, 49),
    ("1^6,2^2", 16, 48),
    ("1^7,2", 32, 47),
    ("1^8", 56, 46),
];
