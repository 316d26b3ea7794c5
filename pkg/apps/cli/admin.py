# Django modules
from django.contrib import admin

# Project modules
from .models import RunManifest


@admin.register(RunManifest)
class RunManifestAdmin(admin.ModelAdmin):
    """
    Run manifest admin configuration class.
    """

    list_display = (
        "id",
        "command",
        "exit_code",
        "wall_time",
        "seed",
        "threads",
        "created_at",
    )
    search_fields = (
        "command",
        "run_dir",
    )
    list_filter = (
        "command",
        "exit_code",
        "created_at",
    )
    ordering = ("-created_at",)

    fieldsets = [
        (
            "Run",
            {
                "fields": (
                    "command",
                    "argv",
                    "exit_code",
                    "wall_time",
                    "seed",
                    "threads",
                    "run_dir",
                ),
            },
        ),
        (
            "Records",
            {
                "fields": ("inputs", "versions", "outputs"),
            },
        ),
        (
            "Important Dates",
            {
                "fields": ("created_at", "updated_at", "deleted_at"),
            },
        ),
    ]

    readonly_fields = ("created_at", "updated_at", "deleted_at")
