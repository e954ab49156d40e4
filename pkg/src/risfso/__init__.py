"""RIS-aided RF-FSO secrecy toolkit."""
__version__ = "0.1.0"
