"""Growth and Gelfand-Kirillov dimension of O_q(G) for types A, C, D at desk scale."""

__version__ = "0.1.0"
