# Python modules
from typing import Any

# Django modules
from django.db.models import (
    Model,
    Manager,
    QuerySet,
    DateTimeField,
)
from django.utils import timezone as django_timezone


class AliveQuerySet(QuerySet):
    """QuerySet aware of soft-deleted rows."""

    def alive(self) -> "AliveQuerySet":
        return self.filter(deleted_at__isnull=True)

    def dead(self) -> "AliveQuerySet":
        return self.filter(deleted_at__isnull=False)


class AliveManager(Manager.from_queryset(AliveQuerySet)):
    """Manager hiding soft-deleted rows."""

    def get_queryset(self) -> AliveQuerySet:
        return super().get_queryset().alive()


class AbstractBaseModel(Model):
    """Abstract base model with bookkeeping timestamps."""

    created_at = DateTimeField(auto_now_add=True, verbose_name="Created at")
    updated_at = DateTimeField(auto_now=True, verbose_name="Updated at")
    deleted_at = DateTimeField(
        null=True,
        blank=True,
        verbose_name="Deleted at"
    )

    objects = AliveManager()
    all_objects = Manager()

    class Meta:
        """Meta class."""

        abstract = True

    def soft_delete(
        self, *args: tuple[Any, ...],
        **kwargs: dict[Any, Any]
    ) -> None:
        """Hide the row without dropping it."""
        self.deleted_at = django_timezone.now()
        self.save(update_fields=["deleted_at"])

    def restore(self) -> None:
        """Undo a soft delete."""
        self.deleted_at = None
        self.save(update_fields=["deleted_at"])
