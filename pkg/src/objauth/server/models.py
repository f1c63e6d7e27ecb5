"""Wire schemas for the JSON request bodies."""
from pydantic import BaseModel


class LoginHashRequest(BaseModel):
    user_id: str
    password: str


class TextSignupRequest(BaseModel):
    user_id: str
    password: str
