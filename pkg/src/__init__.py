"""RoleModel - Role-model peer effects on networks with latent homophily correction."""

__version__ = "0.1.0"
