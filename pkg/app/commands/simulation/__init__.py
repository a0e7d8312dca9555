from .simulate_contact_command import SimulateContactCommand

__all__ = ["SimulateContactCommand"]
