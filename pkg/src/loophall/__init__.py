"""loophall: exact canonical bases for the Drinfeld positive half of
quantum affine sl2 via coherent sheaves on the projective line, verified
against brute-force finite-field Hall-algebra counting oracles."""

__version__ = '0.1.0'
