"""Link invariants, singular invariants and their plug-in models."""
